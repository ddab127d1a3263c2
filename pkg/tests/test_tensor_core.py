"""Dense symmetric eigensolver and density-matrix plumbing.

numpy.linalg.eigh serves as the reference oracle for the Jacobi solver;
the package itself never calls it.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entailkit.tensor_core import (
    DensityMatrix,
    WordVector,
    check_symmetric,
    eig_sym,
    log_on_support,
    normalize_l1,
    normalize_trace,
    support_basis,
)


def _random_symmetric(rng, dim, scale=1.0):
    g = rng.standard_normal((dim, dim)) * scale
    return (g + g.T) / 2.0


def _random_psd(rng, dim, rank=None):
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank))
    return g @ g.T


# ---------------------------------------------------------------------------
# eig_sym against the numpy oracle


def test_eig_sym_matches_numpy_on_many_random_matrices():
    rng = np.random.default_rng(7)
    for trial in range(500):
        dim = int(rng.integers(1, 21))
        kind = trial % 4
        if kind == 0:
            a = _random_symmetric(rng, dim)
        elif kind == 1:
            a = _random_psd(rng, dim)
        elif kind == 2:
            a = _random_psd(rng, dim, rank=max(1, dim // 2))
        else:
            a = np.diag(rng.standard_normal(dim))
        spec = eig_sym(a)
        reference = np.linalg.eigh(a)[0][::-1]
        np.testing.assert_allclose(spec.eigenvalues, reference, atol=1e-8, rtol=1e-8)
        v = spec.eigenvectors
        np.testing.assert_allclose(v.T @ v, np.eye(dim), atol=1e-10)
        np.testing.assert_allclose(
            v @ np.diag(spec.eigenvalues) @ v.T, a, atol=1e-9
        )


def test_eig_sym_eigenvalues_sorted_descending():
    rng = np.random.default_rng(3)
    a = _random_symmetric(rng, 9)
    spec = eig_sym(a)
    assert np.all(np.diff(spec.eigenvalues) <= 0)


def test_eig_sym_diagonal_input_is_exact():
    a = np.diag([3.0, -1.0, 2.0])
    spec = eig_sym(a)
    assert spec.eigenvalues.tolist() == [3.0, 2.0, -1.0]
    # columns are signed unit vectors picking out the diagonal entries
    expected = np.zeros((3, 3))
    expected[0, 0] = expected[2, 1] = expected[1, 2] = 1.0
    np.testing.assert_array_equal(spec.eigenvectors, expected)


def test_eig_sym_sign_convention_is_deterministic():
    rng = np.random.default_rng(11)
    a = _random_symmetric(rng, 6)
    first = eig_sym(a)
    second = eig_sym(a.copy())
    np.testing.assert_array_equal(first.eigenvectors, second.eigenvectors)
    # largest-magnitude component of every eigenvector is positive
    v = first.eigenvectors
    for col in v.T:
        assert col[np.argmax(np.abs(col))] > 0


def test_eig_sym_rejects_asymmetric_input():
    with pytest.raises(ValueError):
        eig_sym(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        eig_sym(np.ones((2, 3)))


@settings(max_examples=60, deadline=None)
@given(
    entries=st.lists(
        st.floats(min_value=-10.0, max_value=10.0, allow_nan=False),
        min_size=1,
        max_size=36,
    )
)
def test_eig_sym_reconstruction_property(entries):
    dim = int(np.sqrt(len(entries)))
    if dim < 1:
        return
    g = np.array(entries[: dim * dim]).reshape(dim, dim)
    a = (g + g.T) / 2.0
    spec = eig_sym(a)
    scale = max(1.0, np.abs(a).max())
    np.testing.assert_allclose(
        spec.eigenvectors @ np.diag(spec.eigenvalues) @ spec.eigenvectors.T,
        a,
        atol=1e-9 * scale,
    )


# ---------------------------------------------------------------------------
# support and logarithm


def test_support_basis_of_rank_deficient_operator():
    a = np.diag([1.0, 1e-20, 0.0])
    basis = support_basis(a)
    assert basis.shape == (3, 1)
    np.testing.assert_allclose(np.abs(basis[:, 0]), [1.0, 0.0, 0.0], atol=1e-12)


def test_support_basis_zero_operator_is_empty():
    basis = support_basis(np.zeros((4, 4)))
    assert basis.shape == (4, 0)


def test_support_basis_columns_orthonormal():
    rng = np.random.default_rng(5)
    a = _random_psd(rng, 7, rank=3)
    basis = support_basis(a)
    assert basis.shape == (7, 3)
    np.testing.assert_allclose(basis.T @ basis, np.eye(3), atol=1e-10)
    # the basis spans the operator: projecting changes nothing
    proj = basis @ basis.T
    np.testing.assert_allclose(proj @ a @ proj, a, atol=1e-9)


def test_log_on_support_diagonal():
    a = np.diag([np.e, 1.0, 0.0])
    np.testing.assert_allclose(
        log_on_support(a), np.diag([1.0, 0.0, 0.0]), atol=1e-12
    )


def test_log_on_support_inverts_exp_on_support():
    rng = np.random.default_rng(13)
    basis = support_basis(_random_psd(rng, 5, rank=2))
    vals = np.array([0.7, 0.3])
    a = basis @ np.diag(vals) @ basis.T
    log_a = log_on_support(a)
    np.testing.assert_allclose(
        log_a, basis @ np.diag(np.log(vals)) @ basis.T, atol=1e-10
    )


def test_log_on_support_zero_operator_raises():
    with pytest.raises(ValueError):
        log_on_support(np.zeros((3, 3)))


# ---------------------------------------------------------------------------
# DensityMatrix validation


def test_density_matrix_accepts_valid_state():
    rho = DensityMatrix(np.diag([0.25, 0.75]), label="test")
    assert rho.dim == 2
    np.testing.assert_allclose(rho.spectrum.eigenvalues, [0.75, 0.25])


def test_density_matrix_spectrum_is_cached():
    rho = DensityMatrix(np.diag([0.5, 0.5]))
    assert rho.spectrum is rho.spectrum


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(np.diag([0.6, 0.6]))


def test_density_matrix_rejects_asymmetric():
    m = np.array([[0.5, 0.3], [0.1, 0.5]])
    with pytest.raises(ValueError):
        DensityMatrix(m)


def test_density_matrix_rejects_negative_eigenvalues():
    m = np.array([[0.0, 0.5], [0.5, 1.0]])  # eigenvalues (1+sqrt(2))/2, (1-sqrt(2))/2
    m = m / np.trace(m)
    with pytest.raises(ValueError):
        DensityMatrix(m)


def test_density_matrix_clamps_tolerable_negative_noise():
    eps = 1e-14
    m = np.diag([1.0 + eps, -eps])
    rho = DensityMatrix(m)
    assert rho.spectrum.eigenvalues[-1] == 0.0


def test_density_matrix_rejects_non_square():
    with pytest.raises(ValueError):
        DensityMatrix(np.ones((2, 3)) / 6.0)


# ---------------------------------------------------------------------------
# vectors and normalisation helpers


def test_word_vector_basics():
    v = WordVector(np.array([1.0, 3.0]), label="w")
    assert v.dim == 2
    np.testing.assert_allclose(v.normalized_l1().entries, [0.25, 0.75])


def test_normalize_l1():
    np.testing.assert_allclose(normalize_l1(np.array([2.0, 2.0])), [0.5, 0.5])
    with pytest.raises(ValueError):
        normalize_l1(np.zeros(3))


def test_normalize_trace_returns_density():
    rho = normalize_trace(np.diag([2.0, 6.0]))
    assert isinstance(rho, DensityMatrix)
    np.testing.assert_allclose(np.diag(rho.matrix), [0.25, 0.75])
    with pytest.raises(Exception):
        normalize_trace(np.zeros((2, 2)))


def test_check_symmetric_relative_tolerance():
    a = np.array([[1e8, 1.0], [1.0 + 1e-4, 1e8]])
    check_symmetric(a)  # asymmetry is tiny relative to the scale
    with pytest.raises(ValueError):
        check_symmetric(np.array([[1.0, 0.0], [1.0, 1.0]]))
