"""The hand-rolled solvers are cross-checked against LAPACK (numpy)."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergkit.linalg import (hermitian_defect, jacobi_eigh, pivoted_cholesky,
                            solve_lower_triangular)

RESIDUAL_BUDGET = 1e-10


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16, 32, 64])
def test_jacobi_matches_lapack(n):
    rng = np.random.default_rng(n)
    a = random_hermitian(rng, n)
    w, v = jacobi_eigh(a)
    w_ref = np.linalg.eigvalsh(a)
    scale = max(np.abs(w_ref).max(), 1.0)
    assert np.max(np.abs(w - w_ref)) <= 1e-12 * scale
    # eigenvector residual contract
    norm = np.linalg.norm(a, 2)
    for k in range(n):
        res = np.linalg.norm(a @ v[:, k] - w[k] * v[:, k])
        assert res <= RESIDUAL_BUDGET * norm
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=10), st.integers(min_value=0, max_value=10_000))
def test_jacobi_eigenvalues_property(n, seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, n)
    w, _ = jacobi_eigh(a, compute_vectors=False)
    w_ref = np.linalg.eigvalsh(a)
    scale = max(np.abs(w_ref).max(), 1.0)
    assert np.max(np.abs(w - w_ref)) <= 1e-11 * scale
    assert np.all(np.diff(w) >= 0)


def test_jacobi_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_jacobi_rejects_non_square():
    with pytest.raises(ValueError):
        jacobi_eigh(np.ones((2, 3)))


def test_hermitian_defect():
    assert hermitian_defect(np.eye(3)) == 0.0
    assert hermitian_defect(np.array([[0, 1j], [0, 0]])) == pytest.approx(1.0)


def test_pivoted_cholesky_reconstructs():
    rng = np.random.default_rng(5)
    b = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    a = b @ b.conj().T + 0.1 * np.eye(6)
    kept, lower, dropped = pivoted_cholesky(a)
    assert not dropped
    sub = a[np.ix_(kept, kept)]
    assert np.allclose(lower @ lower.conj().T, sub, atol=1e-12 * np.abs(a).max())


def test_pivoted_cholesky_drops_dependent_directions():
    v = np.array([1.0, 2.0, 3.0])
    a = np.outer(v, v)  # rank one
    kept, lower, dropped = pivoted_cholesky(a)
    assert len(kept) == 1
    assert len(dropped) == 2
    assert kept[0] == 2  # largest diagonal first


def test_solve_lower_triangular():
    rng = np.random.default_rng(9)
    l = np.tril(rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)))
    l += 5 * np.eye(5)
    b = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
    x = solve_lower_triangular(l, b)
    assert np.allclose(l @ x, b, atol=1e-12)
    xv = solve_lower_triangular(l, b[:, 0])
    assert np.allclose(l @ xv, b[:, 0], atol=1e-12)
