"""Holomorphic self-maps of the right half-plane H = {Re z > 0}.

Provides the closed-form symbol families (affine maps, Moebius maps,
principal power maps, Cayley conjugates of disc maps, compositions),
self-map validation, non-tangential sample grids, and the estimator for
the angular derivative at infinity

    lambda = lim z / phi(z)  (non-tangential)  =  sup_{z in H} Re z / Re phi(z).

All symbol objects are immutable values; evaluation accepts scalars or
numpy arrays of half-plane points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

__all__ = [
    "Symbol",
    "Affine",
    "Moebius",
    "PowerMap",
    "CayleyMap",
    "Compose",
    "SampleGrid",
    "DEFAULT_GRID",
    "ValidationResult",
    "AngularDerivativeEstimate",
    "HalfPlaneError",
    "CoefficientOverflow",
    "identity",
    "compose",
    "iterate",
    "cayley_conjugate",
    "validate_self_map",
    "eval_symbol",
    "angular_derivative_estimate",
    "symbol_from_dict",
]

_COEFF_LIMIT = 1e300


class HalfPlaneError(ValueError):
    """A point or symbol image left the open right half-plane."""


class CoefficientOverflow(OverflowError):
    """Composed symbol coefficients exceeded the representable range."""


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _unpair(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(value[0], value[1])
    return complex(value)


class Symbol:
    """Base class for closed-form self-map candidates of the half-plane."""

    kind = "abstract"

    def __call__(self, z):
        raise NotImplementedError

    @property
    def known_lambda(self) -> Optional[float]:
        """Analytic angular derivative at infinity, when the family provides it."""
        return None

    def to_dict(self) -> dict:
        raise NotImplementedError

    def describe(self) -> str:
        return repr(self)


@dataclass(frozen=True)
class Affine(Symbol):
    """phi(z) = a z + b with real slope a.

    A genuine self-map of H requires a > 0 and Re b >= 0, and then
    lambda = 1/a.  Construction is permissive; ``validate_self_map``
    enforces the family constraints.
    """

    a: float
    b: complex = 0j

    kind = "affine"

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", complex(self.b))

    def __call__(self, z):
        return self.a * z + self.b

    @property
    def known_lambda(self) -> Optional[float]:
        if self.a > 0 and self.b.real >= 0:
            return 1.0 / self.a
        return None

    def to_dict(self) -> dict:
        return {"kind": "affine", "a": self.a, "b": _pair(self.b)}

    def describe(self) -> str:
        return f"affine(a={self.a:g}, b={self.b:g})"


@dataclass(frozen=True)
class Moebius(Symbol):
    """phi(z) = (a z + b) / (c z + d).  Validation is sample-based."""

    a: complex
    b: complex
    c: complex
    d: complex

    kind = "moebius"

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("Moebius map is degenerate (ad - bc = 0)")

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def known_lambda(self) -> Optional[float]:
        return _moebius_lambda(self.a, self.b, self.c, self.d)

    def to_dict(self) -> dict:
        return {"kind": "moebius", "a": _pair(self.a), "b": _pair(self.b),
                "c": _pair(self.c), "d": _pair(self.d)}

    def describe(self) -> str:
        return f"moebius({self.a:g}, {self.b:g}; {self.c:g}, {self.d:g})"


def _moebius_lambda(a: complex, b: complex, c: complex, d: complex) -> Optional[float]:
    # z / phi(z) -> d/a when c = 0; with c != 0 the ratio grows without
    # bound, so no finite angular derivative exists.
    if c != 0 or a == 0:
        return None
    mu = d / a
    if mu.real > 0 and abs(mu.imag) <= 1e-14 * abs(mu):
        return float(mu.real)
    return None


@dataclass(frozen=True)
class PowerMap(Symbol):
    """phi(z) = z**p with the principal branch.

    For 0 < p <= 1 the image of the half-plane lies in the sector
    |arg w| <= p*pi/2, hence in H; the branch cut is never approached.
    """

    p: float

    kind = "power"

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))

    def __call__(self, z):
        return z ** self.p

    @property
    def known_lambda(self) -> Optional[float]:
        if self.p == 1.0:
            return 1.0
        return None

    def to_dict(self) -> dict:
        return {"kind": "power", "p": self.p}

    def describe(self) -> str:
        return f"power(p={self.p:g})"


# Cayley transform tau(zeta) = (1 + zeta)/(1 - zeta) maps the unit disc
# onto H; its inverse is (z - 1)/(z + 1).
_TAU = np.array([[1.0, 1.0], [-1.0, 1.0]], dtype=complex)
_TAU_INV = np.array([[1.0, -1.0], [1.0, 1.0]], dtype=complex)


@dataclass(frozen=True)
class CayleyMap(Symbol):
    """Half-plane conjugate tau o psi o tau^{-1} of a Moebius disc map psi."""

    a: complex
    b: complex
    c: complex
    d: complex

    kind = "cayley"

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @cached_property
    def half_plane_matrix(self) -> np.ndarray:
        psi = np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)
        m = _TAU @ psi @ _TAU_INV
        return m / np.max(np.abs(m))

    def __call__(self, z):
        m = self.half_plane_matrix
        return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])

    @property
    def known_lambda(self) -> Optional[float]:
        m = self.half_plane_matrix
        # The conjugated matrix is computed in floating point; treat a
        # negligible lower-left entry as exactly zero.
        c = m[1, 0]
        if abs(c) <= 1e-14:
            return _moebius_lambda(m[0, 0], m[0, 1], 0.0, m[1, 1])
        return None

    def to_dict(self) -> dict:
        return {"kind": "cayley", "a": _pair(self.a), "b": _pair(self.b),
                "c": _pair(self.c), "d": _pair(self.d)}

    def describe(self) -> str:
        return f"cayley({self.a:g}, {self.b:g}; {self.c:g}, {self.d:g})"


@dataclass(frozen=True)
class Compose(Symbol):
    """Compose(f, g)(z) = f(g(z))."""

    left: Symbol
    right: Symbol

    kind = "compose"

    def __call__(self, z):
        return self.left(self.right(z))

    @property
    def known_lambda(self) -> Optional[float]:
        lf = self.left.known_lambda
        lg = self.right.known_lambda
        if lf is not None and lg is not None:
            return lf * lg
        return None

    def to_dict(self) -> dict:
        return {"kind": "compose", "left": self.left.to_dict(),
                "right": self.right.to_dict()}

    def describe(self) -> str:
        return f"{self.left.describe()} o {self.right.describe()}"


def identity() -> Affine:
    return Affine(1.0, 0j)


def _check_affine_coeffs(a: float, b: complex):
    if abs(a) > _COEFF_LIMIT or abs(b) > _COEFF_LIMIT or not (
            math.isfinite(a) and math.isfinite(abs(b))):
        raise CoefficientOverflow("affine coefficients exceeded 1e300")


def compose(outer: Symbol, inner: Symbol) -> Symbol:
    """Composition outer(inner(z)), simplified within closed families."""
    if isinstance(outer, Affine) and isinstance(inner, Affine):
        a = outer.a * inner.a
        b = outer.a * inner.b + outer.b
        _check_affine_coeffs(a, b)
        return Affine(a, b)
    if isinstance(outer, PowerMap) and isinstance(inner, PowerMap):
        return PowerMap(outer.p * inner.p)
    m_out = _as_matrix(outer)
    m_in = _as_matrix(inner)
    if m_out is not None and m_in is not None:
        m = m_out @ m_in
        m = m / np.max(np.abs(m))
        return Moebius(m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    return Compose(outer, inner)


def _as_matrix(phi: Symbol) -> Optional[np.ndarray]:
    if isinstance(phi, Moebius):
        return phi.matrix()
    if isinstance(phi, CayleyMap):
        return phi.half_plane_matrix
    if isinstance(phi, Affine):
        return np.array([[phi.a, phi.b], [0.0, 1.0]], dtype=complex)
    return None


def iterate(phi: Symbol, n: int) -> Symbol:
    """n-fold self-composition phi o ... o phi."""
    if n < 1:
        raise ValueError("iteration count must be >= 1")
    result = phi
    for _ in range(n - 1):
        result = compose(phi, result)
    return result


def cayley_conjugate(a, b, c, d) -> CayleyMap:
    """Build the half-plane conjugate of the disc Moebius map
    psi(zeta) = (a zeta + b) / (c zeta + d).

    The descriptor is rejected (with a witness) unless psi maps a fixed
    sample of the open disc strictly into the open disc.
    """
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    radii = np.array([0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 0.9999])
    angles = np.linspace(0.0, 2.0 * math.pi, 24, endpoint=False)
    zeta = radii[:, None] * np.exp(1j * angles)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        image = (a * zeta + b) / (c * zeta + d)
    bad = ~np.isfinite(image) | (np.abs(image) >= 1.0)
    if np.any(bad):
        witness = zeta[bad][0]
        raise ValueError(
            f"descriptor is not a disc self-map: |psi({witness:g})| >= 1")
    return CayleyMap(a, b, c, d)


# ---------------------------------------------------------------------------
# Sample grids


@dataclass(frozen=True)
class SampleGrid:
    """Non-tangential point configuration in H.

    Points are r * exp(i*theta) for geometrically spaced radii in
    [r_min, r_max] and equally spaced angles with |theta| <= aperture,
    so |Im z| <= tan(aperture) * Re z throughout.
    """

    aperture: float = math.pi / 3
    r_min: float = 1.0
    r_max: float = 1e6
    radial_count: int = 40
    angular_count: int = 9

    def __post_init__(self):
        if not 0.0 < self.aperture < math.pi / 2:
            raise ValueError("aperture must lie in (0, pi/2)")
        if not 0.0 < self.r_min < self.r_max:
            raise ValueError("need 0 < r_min < r_max")
        if self.radial_count < 2:
            raise ValueError("need at least two radial shells")
        if self.angular_count < 1:
            raise ValueError("need at least one angle")

    @property
    def size(self) -> int:
        return self.radial_count * self.angular_count

    def radii(self) -> np.ndarray:
        return np.geomspace(self.r_min, self.r_max, self.radial_count)

    def angles(self) -> np.ndarray:
        if self.angular_count == 1:
            return np.array([0.0])
        return np.linspace(-self.aperture, self.aperture, self.angular_count)

    def points(self) -> np.ndarray:
        """Grid points, shape (radial_count, angular_count)."""
        return self.radii()[:, None] * np.exp(1j * self.angles())[None, :]

    def flat_points(self) -> np.ndarray:
        return self.points().ravel()

    @property
    def far_field_radius(self) -> float:
        return math.sqrt(self.r_min * self.r_max)

    def sample_points(self, size: int, rng: np.random.Generator,
                      far_field: bool = False) -> np.ndarray:
        """Draw distinct grid points with a seeded generator (reproducible
        configurations for positivity certificates)."""
        pool = self.flat_points()
        if far_field:
            pool = pool[np.abs(pool) >= self.far_field_radius]
        if size > pool.size:
            raise ValueError("not enough grid points to sample from")
        idx = rng.choice(pool.size, size=size, replace=False)
        return pool[np.sort(idx)]

    def to_dict(self) -> dict:
        return {"aperture": self.aperture, "r_min": self.r_min,
                "r_max": self.r_max, "radial": self.radial_count,
                "angular": self.angular_count}

    @classmethod
    def from_dict(cls, data: dict) -> "SampleGrid":
        return cls(aperture=float(data.get("aperture", math.pi / 3)),
                   r_min=float(data.get("r_min", 1.0)),
                   r_max=float(data.get("r_max", 1e6)),
                   radial_count=int(data.get("radial", 40)),
                   angular_count=int(data.get("angular", 9)))


DEFAULT_GRID = SampleGrid()


# ---------------------------------------------------------------------------
# Validation and evaluation


@dataclass(frozen=True)
class ValidationResult:
    accepted: bool
    mode: str  # "exact" for closed-form criteria, "sampled" otherwise
    witness: Optional[complex] = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {"accepted": self.accepted, "mode": self.mode,
                "witness": None if self.witness is None else _pair(self.witness),
                "reason": self.reason}


def _sampled_validation(phi: Symbol, grid: SampleGrid) -> ValidationResult:
    pts = grid.flat_points()
    with np.errstate(divide="ignore", invalid="ignore"):
        image = np.asarray(phi(pts), dtype=complex)
    bad = ~np.isfinite(image) | (image.real <= 0.0)
    if np.any(bad):
        witness = complex(pts[bad][0])
        return ValidationResult(False, "sampled", witness,
                                "image leaves the half-plane at a sample point")
    return ValidationResult(True, "sampled")


def validate_self_map(phi: Symbol, grid: SampleGrid = DEFAULT_GRID) -> ValidationResult:
    """Check that phi maps H into H.

    Affine and power maps are decided exactly from their parameters.
    Moebius maps, Cayley conjugates and compositions are checked at every
    grid point; acceptance is then flagged ``sampled`` so downstream
    reports carry the caveat.  Rejections carry a witness point with
    Re phi(z) <= 0 whenever one exists.
    """
    if isinstance(phi, Affine):
        if phi.a > 0 and phi.b.real >= 0:
            return ValidationResult(True, "exact")
        if phi.a > 0:
            # Re phi(x) = a x + Re b < 0 at x = -Re b / (2a).
            witness = complex(-phi.b.real / (2.0 * phi.a), 0.0)
            return ValidationResult(False, "exact", witness,
                                    "translation leaves the half-plane (Re b < 0)")
        if phi.a == 0:
            witness = None
            if phi.b.real <= 0:
                witness = complex(1.0, 0.0)
            return ValidationResult(False, "exact", witness,
                                    "slope must be positive (constant maps excluded)")
        witness = complex((1.0 + abs(phi.b.real)) / (-phi.a), 0.0)
        return ValidationResult(False, "exact", witness,
                                "negative slope reverses the half-plane")
    if isinstance(phi, PowerMap):
        if 0.0 < phi.p <= 1.0:
            return ValidationResult(True, "exact")
        witness = None
        probe = np.exp(1j * (math.pi / 2) * 0.999999)
        w = probe ** phi.p if phi.p != 0 else complex(1.0)
        if complex(w).real <= 0:
            witness = complex(probe)
        return ValidationResult(False, "exact", witness,
                                "exponent must lie in (0, 1]")
    return _sampled_validation(phi, grid)


def eval_symbol(phi: Symbol, z) -> complex:
    """Evaluate a validated symbol at a half-plane point.

    Raises :class:`HalfPlaneError` if the image leaves H, which signals a
    symbol that slipped through sample-based validation.
    """
    z = complex(z)
    if z.real <= 0.0:
        raise ValueError(f"point {z:g} is not in the open right half-plane")
    try:
        w = complex(phi(z))
    except ZeroDivisionError as exc:
        raise HalfPlaneError(f"symbol has a pole at z = {z:g}") from exc
    if not (math.isfinite(w.real) and math.isfinite(w.imag)) or w.real <= 0.0:
        raise HalfPlaneError(
            f"image {w:g} of z = {z:g} is outside the half-plane")
    return w


# ---------------------------------------------------------------------------
# Angular derivative at infinity

_DIVERGENCE_WINDOW = 5
_DIVERGENCE_GROWTH = 1.5
_PLATEAU_GROWTH = 1.05


@dataclass(frozen=True)
class AngularDerivativeEstimate:
    """Result of the sup-ratio estimator for the angular derivative.

    ``verdict`` is ``finite`` when the per-shell trace has plateaued,
    ``divergent`` when it keeps growing geometrically (then ``lambda_hat``
    is +inf), and ``inconclusive`` otherwise.
    """

    lambda_hat: float
    sup_ratio: float
    trace: tuple
    verdict: str
    known_lambda: Optional[float] = None
    rel_error_vs_known: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "lambda_hat": None if math.isinf(self.lambda_hat) else self.lambda_hat,
            "finite": not math.isinf(self.lambda_hat),
            "sup_ratio": self.sup_ratio,
            "verdict": self.verdict,
            "trace": [[r, v] for r, v in self.trace],
            "known_lambda": self.known_lambda,
            "rel_error_vs_known": self.rel_error_vs_known,
        }


def angular_derivative_estimate(phi: Symbol,
                                grid: SampleGrid = DEFAULT_GRID) -> AngularDerivativeEstimate:
    """Estimate lambda = sup_H Re z / Re phi(z) over a non-tangential grid.

    The per-shell maxima form the convergence trace.  The trace is called
    divergent when it is strictly increasing across the last five shells
    and grows by a factor >= 1.5 over that window (sqrt-type growth clears
    this easily on a three-decade grid, while convergent ratios plateau);
    it is called finite when the window growth stays within 5%.

    Only the sup-ratio criterion is tested; that the point at infinity is
    actually fixed along every non-tangential sequence is not certified
    independently.
    """
    if grid.r_max / grid.r_min < 1e3:
        raise ValueError("grid must span at least a factor 1e3 in radius")
    pts = grid.points()
    with np.errstate(divide="ignore", invalid="ignore"):
        image = np.asarray(phi(pts), dtype=complex)
    if not np.all(np.isfinite(image)) or np.any(image.real <= 0.0):
        bad = (~np.isfinite(image)) | (image.real <= 0.0)
        witness = pts[bad][0]
        raise HalfPlaneError(
            f"symbol leaves the half-plane at grid point {witness:g}")

    ratios = pts.real / image.real
    shell_max = ratios.max(axis=1)
    radii = grid.radii()
    trace = tuple((float(r), float(v)) for r, v in zip(radii, shell_max))
    sup_ratio = float(shell_max.max())

    w = _DIVERGENCE_WINDOW
    if len(shell_max) >= w + 1:
        window = shell_max[-(w + 1):]
        growth = float(window[-1] / window[0])
        increasing = bool(np.all(np.diff(window) > 0.0))
        if increasing and growth >= _DIVERGENCE_GROWTH:
            verdict = "divergent"
        elif growth <= _PLATEAU_GROWTH:
            verdict = "finite"
        else:
            verdict = "inconclusive"
    else:
        spread = float(shell_max.max() / shell_max.min())
        verdict = "finite" if spread <= _PLATEAU_GROWTH else "inconclusive"

    lambda_hat = math.inf if verdict == "divergent" else sup_ratio
    known = phi.known_lambda
    rel_error = None
    if known is not None and not math.isinf(lambda_hat):
        rel_error = abs(lambda_hat - known) / known
    return AngularDerivativeEstimate(lambda_hat, sup_ratio, trace, verdict,
                                     known, rel_error)


# ---------------------------------------------------------------------------
# JSON descriptors


def symbol_from_dict(data: dict) -> Symbol:
    """Rebuild a symbol from its JSON descriptor."""
    kind = data.get("kind")
    if kind == "affine":
        return Affine(float(data["a"]), _unpair(data["b"]))
    if kind == "moebius":
        return Moebius(_unpair(data["a"]), _unpair(data["b"]),
                       _unpair(data["c"]), _unpair(data["d"]))
    if kind == "power":
        return PowerMap(float(data["p"]))
    if kind == "cayley":
        return CayleyMap(_unpair(data["a"]), _unpair(data["b"]),
                         _unpair(data["c"]), _unpair(data["d"]))
    if kind == "compose":
        return Compose(symbol_from_dict(data["left"]),
                       symbol_from_dict(data["right"]))
    raise ValueError(f"unknown symbol kind: {kind!r}")
