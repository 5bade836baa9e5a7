"""Reproducing kernels on the half-plane and positivity certification.

The weighted Bergman space with parameter alpha > -1 has reproducing
kernels

    k_w(z) = 2^alpha (1 + alpha) / (conj(w) + z)^(2 + alpha),

evaluated with the principal power (the base always has positive real
part).  This module builds Hermitian matrices of kernel values at point
configurations, the Nevanlinna kernel (psi(z) + conj psi(w))/(z + conj w),
and the composition-defect kernels

    K^n(w, z) = [ (phi(z) + conj phi(w))^n - lam^{-n} (z + conj w)^n ]
                / (z + conj w)^n,

whose positivity for dyadic n certifies boundedness of the composition
operator with angular derivative lam.  Positivity of a sampled matrix is
decided by a self-contained Hermitian eigensolver (see ``linalg``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .linalg import hermitian_defect, jacobi_eigh, pivoted_cholesky

__all__ = [
    "Weight",
    "KernelMatrix",
    "PsdVerdict",
    "bergman_kernel",
    "kernel_function",
    "gram_matrix",
    "nevanlinna_kernel",
    "defect_kernel",
    "defect_kernel_matrix",
    "factorization_residual",
    "schur_product",
    "add_constant",
    "psd_check",
]

CONDITION_WARNING_LIMIT = 1e12
PSD_REL_TOL = 1e-9


@dataclass(frozen=True)
class Weight:
    """Bergman weight parameter alpha > -1 with its derived constants."""

    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        if not self.alpha > -1.0:
            raise ValueError("weight parameter must satisfy alpha > -1")

    @property
    def norm_const(self) -> float:
        """2^alpha (1 + alpha), the kernel normalization."""
        return 2.0 ** self.alpha * (1.0 + self.alpha)

    @property
    def exponent(self) -> float:
        return 2.0 + self.alpha

    @property
    def half_exponent(self) -> float:
        return (2.0 + self.alpha) / 2.0

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "norm_const": self.norm_const,
                "exponent": self.exponent, "half_exponent": self.half_exponent}


def _require_half_plane(z: complex, label: str) -> complex:
    z = complex(z)
    if z.real <= 0.0:
        raise ValueError(f"{label} = {z:g} is not in the open right half-plane")
    return z


def bergman_kernel(weight: Weight, omega, z):
    """Kernel value k_omega(z); accepts scalars or arrays of points."""
    omega = np.asarray(omega, dtype=complex)
    z = np.asarray(z, dtype=complex)
    if np.any(omega.real <= 0.0) or np.any(z.real <= 0.0):
        raise ValueError("kernel arguments must lie in the open half-plane")
    value = weight.norm_const / (np.conj(omega) + z) ** weight.exponent
    if value.ndim == 0:
        return complex(value)
    return value


def kernel_function(weight: Weight, omega):
    """The function z -> k_omega(z), for quadrature and estimator use."""
    omega = _require_half_plane(omega, "omega")
    wbar = omega.conjugate()
    const = weight.norm_const
    expo = weight.exponent

    def k(z):
        return const / (wbar + np.asarray(z, dtype=complex)) ** expo

    return k


@dataclass(frozen=True)
class KernelMatrix:
    """Hermitian matrix of kernel evaluations with provenance.

    ``entries[i, j] = K(points[j], points[i])``, i.e. column j holds the
    kernel function attached to ``points[j]`` evaluated at every point, so
    for the Bergman kernel ``entries[i, j] = <k_{z_j}, k_{z_i}>``.
    """

    points: tuple
    entries: np.ndarray
    kernel_id: str
    hermitian_defect: float
    condition_estimate: Optional[float] = None

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def conditioning_warning(self) -> bool:
        return (self.condition_estimate is not None
                and self.condition_estimate > CONDITION_WARNING_LIMIT)

    @classmethod
    def build(cls, points, entries, kernel_id: str,
              condition_estimate: Optional[float] = None) -> "KernelMatrix":
        entries = np.asarray(entries, dtype=complex)
        points = tuple(complex(p) for p in points)
        if entries.shape != (len(points), len(points)):
            raise ValueError("entry matrix does not match the point list")
        defect = hermitian_defect(entries)
        scale = float(np.max(np.abs(entries))) if entries.size else 0.0
        if scale > 0 and defect > 1e-10 * scale:
            raise ValueError("kernel matrix is not Hermitian within tolerance")
        return cls(points, entries, kernel_id, defect, condition_estimate)

    def to_dict(self) -> dict:
        return {
            "kernel": self.kernel_id,
            "points": [[p.real, p.imag] for p in self.points],
            "entries": [[[v.real, v.imag] for v in row] for row in self.entries],
            "hermitian_defect": self.hermitian_defect,
            "condition_estimate": self.condition_estimate,
        }


def _condition_estimate(entries: np.ndarray) -> float:
    """Spread of the pivoted-Cholesky pivots of the diagonally normalized
    matrix; blows up when two points nearly coincide."""
    d = entries.diagonal().real
    if np.any(d <= 0.0):
        return math.inf
    scale = 1.0 / np.sqrt(d)
    normalized = entries * np.outer(scale, scale)
    kept, lower, dropped = pivoted_cholesky(normalized, drop_tol=0.0)
    if dropped or len(kept) < entries.shape[0]:
        return math.inf
    pivots = np.abs(np.diag(lower)) ** 2
    return float(pivots.max() / pivots.min())


def gram_matrix(weight: Weight, points: Sequence[complex]) -> KernelMatrix:
    """Gram matrix <k_{z_j}, k_{z_i}> of Bergman kernels at distinct points.

    A conditioning estimate accompanies the matrix; it exceeds 1e12 when
    points nearly coincide, which flags downstream solves as unreliable.
    """
    pts = np.asarray([_require_half_plane(p, "point") for p in points],
                     dtype=complex)
    if len(set(pts.tolist())) != pts.size:
        raise ValueError("points must be distinct")
    base = pts[:, None] + np.conj(pts)[None, :]
    entries = weight.norm_const / base ** weight.exponent
    condition = _condition_estimate(entries)
    return KernelMatrix.build(pts, entries, f"gram(alpha={weight.alpha:g})",
                              condition)


def _eval_map(fn, pts: np.ndarray) -> np.ndarray:
    """Evaluate a symbol or plain callable on an array of points."""
    try:
        values = np.asarray(fn(pts), dtype=complex)
        if values.shape == pts.shape:
            return values
    except Exception:
        pass
    return np.array([complex(fn(complex(p))) for p in pts], dtype=complex)


def nevanlinna_kernel(psi, points: Sequence[complex]) -> KernelMatrix:
    """Matrix of (psi(z_i) + conj psi(z_j)) / (z_i + conj z_j).

    The kernel is positive exactly when Re psi >= 0 on the half-plane, so
    its sampled matrices certify (or refute) positive real part.  ``psi``
    may be a symbol or any callable.
    """
    pts = np.asarray([_require_half_plane(p, "point") for p in points],
                     dtype=complex)
    values = _eval_map(psi, pts)
    entries = (values[:, None] + np.conj(values)[None, :]) / (
        pts[:, None] + np.conj(pts)[None, :])
    return KernelMatrix.build(pts, entries, "nevanlinna")


def defect_kernel(phi, lam: float, n: int, omega, z):
    """Composition-defect kernel K^n(omega, z) for candidate derivative lam."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    if n < 1:
        raise ValueError("kernel power must be a positive integer")
    omega = np.asarray(omega, dtype=complex)
    z = np.asarray(z, dtype=complex)
    base = z + np.conj(omega)
    top = np.asarray(phi(z), dtype=complex) + np.conj(np.asarray(phi(omega),
                                                                 dtype=complex))
    value = (top ** n - lam ** (-float(n)) * base ** n) / base ** n
    if value.ndim == 0:
        return complex(value)
    return value


def defect_kernel_matrix(phi, lam: float, n: int,
                         points: Sequence[complex]) -> KernelMatrix:
    """Sampled matrix of K^n at a point configuration."""
    pts = np.asarray([_require_half_plane(p, "point") for p in points],
                     dtype=complex)
    entries = defect_kernel(phi, lam, n, pts[None, :], pts[:, None])
    return KernelMatrix.build(pts, entries, f"defect(n={n}, lam={lam:g})")


def factorization_residual(phi, lam: float, level: int, pairs) -> float:
    """Largest relative residual of the doubling identity

        K^{2m} = K^m (K^m + 2 lam^{-m}),   m = 2**level,

    over the supplied (omega, z) pairs.  The identity is exact algebra;
    residuals are normalized by the largest intermediate magnitude, so the
    result sits at the rounding floor for any correct implementation.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    m = 2 ** level
    pair_array = np.asarray(pairs, dtype=complex)
    if pair_array.ndim != 2 or pair_array.shape[1] != 2:
        raise ValueError("pairs must be an iterable of (omega, z)")
    omega = pair_array[:, 0]
    z = pair_array[:, 1]
    km = defect_kernel(phi, lam, m, omega, z)
    k2m = defect_kernel(phi, lam, 2 * m, omega, z)
    product = km * (km + 2.0 * lam ** (-float(m)))
    base = z + np.conj(omega)
    top = np.asarray(phi(z), dtype=complex) + np.conj(np.asarray(phi(omega),
                                                                 dtype=complex))
    # Cancellation scale: the powers entering both sides.
    scale = np.maximum.reduce([
        np.abs(top / base) ** (2 * m),
        np.full(omega.shape, lam ** (-2.0 * float(m))),
        np.abs(k2m),
        np.abs(product),
    ])
    scale = np.maximum(scale, 1e-300)
    return float(np.max(np.abs(k2m - product) / scale))


def schur_product(m1: KernelMatrix, m2: KernelMatrix) -> KernelMatrix:
    """Entrywise (Schur) product; preserves positivity."""
    if m1.points != m2.points:
        raise ValueError("kernel matrices are sampled at different points")
    return KernelMatrix.build(m1.points, m1.entries * m2.entries,
                              f"schur({m1.kernel_id}, {m2.kernel_id})")


def add_constant(m: KernelMatrix, c: float) -> KernelMatrix:
    """Entrywise addition of a constant c >= 0; preserves positivity."""
    if c < 0:
        raise ValueError("constant must be nonnegative")
    return KernelMatrix.build(m.points, m.entries + c,
                              f"{m.kernel_id}+{c:g}")


@dataclass(frozen=True)
class PsdVerdict:
    """Outcome of a positive-semidefiniteness check.

    ``is_psd`` holds exactly when the smallest eigenvalue of the Hermitian
    part clears ``-threshold``; otherwise ``witness`` is a coefficient
    vector with c* M c < 0.
    """

    min_eigenvalue: float
    threshold: float
    is_psd: bool
    witness: Optional[tuple] = None

    def to_dict(self) -> dict:
        return {
            "min_eigenvalue": self.min_eigenvalue,
            "threshold": self.threshold,
            "is_psd": self.is_psd,
            "witness": None if self.witness is None else
            [[w.real, w.imag] for w in self.witness],
        }


def psd_check(matrix, rel_tol: float = PSD_REL_TOL) -> PsdVerdict:
    """Positivity verdict for a Hermitian matrix (or KernelMatrix).

    The smallest eigenvalue comes from the rotation-based solver in
    ``linalg``.  The acceptance threshold is ``rel_tol * max(1, trace/n)``,
    an absolute floor made scale-aware so that roundoff on large-magnitude
    kernels does not produce false negatives.
    """
    entries = matrix.entries if isinstance(matrix, KernelMatrix) else matrix
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if scale > 0 and hermitian_defect(a) > 1e-10 * scale:
        raise ValueError("matrix is not Hermitian within the defect tolerance")
    hermitian_part = 0.5 * (a + a.conj().T)
    eigenvalues, _ = jacobi_eigh(hermitian_part, compute_vectors=False)
    min_eig = float(eigenvalues[0])
    trace = float(np.trace(hermitian_part).real)
    threshold = rel_tol * max(1.0, trace / max(n, 1))
    is_psd = min_eig >= -threshold
    witness = None
    if not is_psd:
        _, vectors = jacobi_eigh(hermitian_part, compute_vectors=True)
        witness = tuple(complex(v) for v in vectors[:, 0])
    return PsdVerdict(min_eig, threshold, is_psd, witness)
