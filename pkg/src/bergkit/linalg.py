"""Self-contained dense Hermitian linear algebra.

Positivity verdicts and norm lower bounds produced by this package are
meant to be cross-checkable against LAPACK rather than built on top of
it, so the eigensolver and factorization here are hand-rolled.  All
matrices are small (n <= 64); robustness is preferred over speed.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "hermitian_defect",
    "jacobi_eigh",
    "pivoted_cholesky",
    "solve_lower_triangular",
]


def hermitian_defect(matrix) -> float:
    """Largest entrywise deviation |M - M*| from conjugate symmetry."""
    a = np.asarray(matrix, dtype=complex)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def _offdiagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(matrix, compute_vectors: bool = True, tol: float = 1e-14,
                max_sweeps: int = 60):
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi rotations.

    Each rotation is a 2x2 unitary that annihilates one off-diagonal pair;
    sweeps repeat until the off-diagonal Frobenius mass falls below
    ``tol * ||M||_F``.  Eigenvalues are returned in ascending order; the
    matching unitary eigenvector matrix (columns) is returned when
    ``compute_vectors`` is set, otherwise ``None``.

    Residuals satisfy ``||M v - w v|| <= ~1e-13 ||M||`` for every pair,
    far inside the 1e-10 budget the positivity checks rely on.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    if n == 0:
        return np.empty(0), (np.empty((0, 0), dtype=complex) if compute_vectors else None)

    scale = max(float(np.max(np.abs(a))), 1e-300)
    if hermitian_defect(a) > 1e-8 * scale:
        raise ValueError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)

    v = np.eye(n, dtype=complex) if compute_vectors else None
    fro = float(np.linalg.norm(a))
    if fro == 0.0 or n == 1:
        w = a.diagonal().real.copy()
        return w, v

    # Rotations on entries this small cannot move the off-diagonal mass
    # above the convergence target, so they are skipped.
    skip = tol * fro / (2.0 * n)

    for _ in range(max_sweeps):
        if _offdiagonal_norm(a) <= tol * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                phase = apq / r
                tau = (aqq - app) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # Unitary acting on the (p, q) plane: columns transform by u,
                # rows by u*.
                u = np.array([[c, s * phase],
                              [-s * np.conj(phase), c]])
                a[:, [p, q]] = a[:, [p, q]] @ u
                a[[p, q], :] = u.conj().T @ a[[p, q], :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if v is not None:
                    v[:, [p, q]] = v[:, [p, q]] @ u

    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    if v is not None:
        v = v[:, order]
    return w, v


def pivoted_cholesky(matrix, drop_tol: float = 1e-12):
    """Cholesky factorization with greedy diagonal pivoting.

    Factors the Hermitian PSD matrix as ``M[kept][:, kept] = L L*`` where
    ``kept`` is the pivot order.  Pivoting stops once the largest remaining
    Schur-complement diagonal drops below ``drop_tol`` times the largest
    initial diagonal; the indices left over are reported as dropped instead
    of being regularized, which would spoil lower-bound guarantees built on
    the factor.

    Returns ``(kept, L, dropped)`` with ``L`` lower triangular of size
    ``len(kept)``.
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    a = 0.5 * (a + a.conj().T)

    diag0 = a.diagonal().real
    if n == 0:
        return [], np.empty((0, 0), dtype=complex), []
    ceiling = float(np.max(diag0))
    if ceiling <= 0.0:
        return [], np.empty((0, 0), dtype=complex), list(range(n))
    floor = drop_tol * ceiling

    work = a.copy()
    chosen: list[int] = []
    columns: list[np.ndarray] = []
    available = np.ones(n, dtype=bool)
    for _ in range(n):
        d = np.where(available, work.diagonal().real, -np.inf)
        j = int(np.argmax(d))
        if d[j] <= floor:
            break
        piv = math.sqrt(d[j])
        col = work[:, j] / piv
        col[~available] = 0.0
        chosen.append(j)
        columns.append(col)
        available[j] = False
        work = work - np.outer(col, col.conj())

    k = len(chosen)
    lower = np.zeros((k, k), dtype=complex)
    for cidx, col in enumerate(columns):
        for ridx in range(cidx, k):
            lower[ridx, cidx] = col[chosen[ridx]]
    dropped = [i for i in range(n) if available[i]]
    return chosen, lower, dropped


def solve_lower_triangular(lower, rhs):
    """Forward substitution ``L X = B`` for lower-triangular ``L``."""
    l = np.asarray(lower, dtype=complex)
    b = np.array(rhs, dtype=complex)
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    n = l.shape[0]
    x = np.zeros_like(b)
    for i in range(n):
        x[i] = (b[i] - l[i, :i] @ x[:i]) / l[i, i]
    return x[:, 0] if squeeze else x
