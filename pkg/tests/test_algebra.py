import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swkernel.algebra import (
    as_hermitian,
    build_basis,
    cartan_generator,
    eigvals_desc,
    haar_unitaries,
    is_hermitian,
    random_hermitian,
    sample_haar_unitary,
    spectral_decompose,
)
from swkernel.errors import ContractViolationError, InvalidDimensionError

PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])

# textbook Gell-Mann matrices l1..l8
GELL_MANN = np.zeros((8, 3, 3), complex)
GELL_MANN[0][[0, 1], [1, 0]] = 1
GELL_MANN[1][0, 1], GELL_MANN[1][1, 0] = -1j, 1j
GELL_MANN[2] = np.diag([1, -1, 0])
GELL_MANN[3][[0, 2], [2, 0]] = 1
GELL_MANN[4][0, 2], GELL_MANN[4][2, 0] = -1j, 1j
GELL_MANN[5][[1, 2], [2, 1]] = 1
GELL_MANN[6][1, 2], GELL_MANN[6][2, 1] = -1j, 1j
GELL_MANN[7] = np.diag([1, 1, -2]) / np.sqrt(3)

DIMS = [2, 3, 4, 5, 6]


def test_pauli_matrices():
    np.testing.assert_array_equal(build_basis(2).elements, PAULI)


def test_gell_mann_matrices():
    np.testing.assert_allclose(build_basis(3).elements, GELL_MANN, atol=1e-15)


def test_lambda15_normalization():
    expected = np.diag([1, 1, 1, -3]) / np.sqrt(6)
    np.testing.assert_allclose(build_basis(4).element(15), expected, atol=1e-15)


@pytest.mark.parametrize("dim", DIMS)
def test_orthonormal_traceless_hermitian(dim):
    el = build_basis(dim).elements
    assert el.shape == (dim * dim - 1, dim, dim)
    gram = np.einsum("aij,bji->ab", el, el)
    np.testing.assert_allclose(gram, 2 * np.eye(dim * dim - 1), atol=1e-13)
    np.testing.assert_allclose(np.trace(el, axis1=1, axis2=2), 0, atol=1e-14)
    assert all(is_hermitian(m) for m in el)


@pytest.mark.parametrize("dim", DIMS)
def test_completeness_relation(dim):
    # sum_a (l_a)_ij (l_a)_kl = 2 (d_il d_jk - d_ij d_kl / N)
    el = build_basis(dim).elements
    lhs = np.einsum("aij,akl->ijkl", el, el)
    e = np.eye(dim)
    rhs = 2 * (np.einsum("il,jk->ijkl", e, e) - np.einsum("ij,kl->ijkl", e, e) / dim)
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


@pytest.mark.parametrize("dim", DIMS)
def test_cartan_labels(dim):
    b = build_basis(dim)
    assert b.cartan_labels == tuple(s * s - 1 for s in range(2, dim + 1))
    for lab in b.cartan_labels:
        m = b.element(lab)
        np.testing.assert_array_equal(m, np.diag(np.diag(m)))
    off = [b.element(a) for a in range(1, dim * dim) if a not in b.cartan_labels]
    assert all(np.allclose(np.diag(m), 0) for m in off)


@pytest.mark.parametrize("dim", [3, 4, 5])
def test_commutators_close(dim):
    b = build_basis(dim)
    rng = np.random.default_rng(dim)
    for a, c in rng.integers(1, dim * dim, size=(10, 2)):
        comm = b.element(a) @ b.element(c) - b.element(c) @ b.element(a)
        # [l_a, l_c] is anti-Hermitian and traceless: -i[.,.] lies in the real span
        h = -1j * comm
        coef = b.coefficients(h)
        np.testing.assert_allclose(np.einsum("a,aij->ij", coef, b.elements), h, atol=1e-13)


def test_coefficients_roundtrip(rng):
    b = build_basis(4)
    x = rng.normal(size=15)
    m = np.einsum("a,aij->ij", x, b.elements)
    np.testing.assert_allclose(b.coefficients(m), x, atol=1e-14)


def test_cartan_generator_rejects_bad_index():
    with pytest.raises(InvalidDimensionError):
        cartan_generator(5, 4)


@pytest.mark.parametrize("dim", [1, 0, 2.5, -3])
def test_invalid_dimension(dim):
    with pytest.raises(InvalidDimensionError):
        build_basis(dim)


def test_basis_is_read_only():
    with pytest.raises(ValueError):
        build_basis(3).elements[0, 0, 0] = 5


def test_as_hermitian_rejects():
    with pytest.raises(ContractViolationError, match="not Hermitian"):
        as_hermitian([[0, 1], [0, 0]])
    with pytest.raises(ContractViolationError, match="square"):
        as_hermitian(np.zeros((2, 3)))


# -- spectral decomposition --------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(dim=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
def test_spectral_reconstruct(dim, seed):
    m = random_hermitian(dim, seed)
    dec = spectral_decompose(m)
    assert np.all(np.diff(dec.eigenvalues) <= 0)
    np.testing.assert_allclose(dec.reconstruct(), m, atol=1e-12)
    u = dec.eigenvectors
    np.testing.assert_allclose(u.conj().T @ u, np.eye(dim), atol=1e-12)


def test_phase_convention(rng):
    dec = spectral_decompose(random_hermitian(4, rng))
    for col in dec.eigenvectors.T:
        first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert first.real > 0 and abs(first.imag) < 1e-15


def test_spectrum_permutation_invariant(rng):
    m = random_hermitian(5, rng)
    p = np.eye(5)[rng.permutation(5)]
    np.testing.assert_allclose(eigvals_desc(p @ m @ p.T), eigvals_desc(m), atol=1e-12)


def test_decomposition_deterministic():
    m = random_hermitian(4, 7)
    a, b = spectral_decompose(m), spectral_decompose(m.copy())
    np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
    np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)


def test_degenerate_spectrum():
    w = np.array([2.0, 2.0, -1.0, -3.0])
    u = sample_haar_unitary(4, 3)
    m = u @ np.diag(w) @ u.conj().T
    np.testing.assert_allclose(eigvals_desc(m), w, atol=1e-12)


# -- Haar sampling -----------------------------------------------------------


@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_haar_special_unitary(dim):
    us = haar_unitaries(dim, 200, 1)
    eye = np.broadcast_to(np.eye(dim), us.shape)
    np.testing.assert_allclose(us @ np.conj(np.swapaxes(us, 1, 2)), eye, atol=1e-12)
    np.testing.assert_allclose(np.linalg.det(us), 1.0, atol=1e-12)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_haar_entry_moments(dim):
    # E|U_11|^2 = 1/N, E|U_11|^4 = 2/(N(N+1))
    m = 40_000
    x = np.abs(haar_unitaries(dim, m, 11)[:, 0, 0]) ** 2
    assert abs(x.mean() - 1 / dim) < 5 * x.std() / np.sqrt(m)
    y = x**2
    assert abs(y.mean() - 2 / (dim * (dim + 1))) < 5 * y.std() / np.sqrt(m)


def test_haar_left_invariance():
    # trace of U is invariant in distribution under U -> V U
    v = sample_haar_unitary(3, 5)
    us = haar_unitaries(3, 40_000, 6)
    a = np.abs(np.trace(us, axis1=1, axis2=2)) ** 2
    b = np.abs(np.trace(v @ us, axis1=1, axis2=2)) ** 2
    # E|tr U|^2 = 1 for U(N), SU(N) with N >= 2
    assert abs(a.mean() - 1) < 0.05 and abs(b.mean() - 1) < 0.05


def test_haar_seed_determinism():
    np.testing.assert_array_equal(sample_haar_unitary(4, 123), sample_haar_unitary(4, 123))
    assert not np.allclose(sample_haar_unitary(4, 123), sample_haar_unitary(4, 124))
