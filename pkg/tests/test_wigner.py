import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swkernel.algebra import build_basis, haar_unitaries, sample_haar_unitary
from swkernel.errors import ContractViolationError
from swkernel.kernels import build_kernel, family_kernel
from swkernel.moduli import ModuliPoint, random_moduli_point
from swkernel.wigner import (
    DensityMatrix,
    bloch_to_matrix,
    check_sw_postulates,
    random_density_matrix,
    reconstruct_mc,
    to_bloch,
    weingarten_check,
    weingarten_tensor,
    weingarten_value,
    wigner_cartan,
    wigner_sweep,
    wigner_value,
)

# -- states and Bloch vectors ------------------------------------------------


def test_density_matrix_validation():
    with pytest.raises(ContractViolationError, match="trace"):
        DensityMatrix(np.eye(2) * 0.6)
    with pytest.raises(ContractViolationError, match="positive"):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(ContractViolationError, match="Hermitian"):
        DensityMatrix(np.array([[0.5, 1], [0, 0.5]]))
    rho = DensityMatrix(np.eye(3) / 3)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_bloch_examples():
    np.testing.assert_allclose(to_bloch(DensityMatrix.pure([1, 0])), [0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(to_bloch(DensityMatrix.pure([1, 1])), [1, 0, 0], atol=1e-15)
    xi = to_bloch(DensityMatrix.pure([1, 0, 0]))
    expected = np.zeros(8)
    expected[2], expected[7] = math.sqrt(3) / 2, 0.5
    np.testing.assert_allclose(xi, expected, atol=1e-15)
    np.testing.assert_allclose(to_bloch(np.eye(4) / 4), 0, atol=1e-15)


@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_bloch_norms(dim, rng):
    for _ in range(10):
        pure = random_density_matrix(dim, rng, rank=1)
        assert np.linalg.norm(pure.bloch) == pytest.approx(1.0, abs=1e-12)
        mixed = random_density_matrix(dim, rng)
        assert np.linalg.norm(mixed.bloch) < 1
        np.testing.assert_allclose(DensityMatrix.from_bloch(mixed.bloch).matrix, mixed.matrix, atol=1e-13)


def test_bloch_to_matrix_dim():
    assert bloch_to_matrix(np.zeros(15)).shape == (4, 4)


# -- Wigner values -----------------------------------------------------------


def test_maximally_mixed_gives_one_over_n(rng):
    for n in (2, 3, 4, 5):
        k = build_kernel(random_moduli_point(n, rng), sample_haar_unitary(n, rng))
        assert wigner_value(np.eye(n) / n, k) == pytest.approx(1 / n, abs=1e-14)


def test_luis_kernel_value():
    rho = np.diag([1.0, 0.0, 0.0])
    assert wigner_value(rho, family_kernel("qutrit", -1.0)) == pytest.approx(1.0, abs=1e-14)


def test_wigner_shape_mismatch():
    with pytest.raises(ContractViolationError, match="shape"):
        wigner_value(np.eye(2) / 2, np.eye(3))


@settings(max_examples=50, deadline=None)
@given(dim=st.integers(2, 5), seed=st.integers(0, 2**32 - 1))
def test_value_bounded_by_spectrum(dim, seed):
    rng = np.random.default_rng(seed)
    k = build_kernel(random_moduli_point(dim, rng), sample_haar_unitary(dim, rng))
    rho = random_density_matrix(dim, rng)
    w = wigner_value(rho, k)
    assert k.spectrum[-1] - 1e-12 <= w <= k.spectrum[0] + 1e-12


@settings(max_examples=50, deadline=None)
@given(dim=st.integers(2, 5), seed=st.integers(0, 2**32 - 1), a=st.floats(0, 1))
def test_value_is_affine_in_state(dim, seed, a):
    rng = np.random.default_rng(seed)
    k = build_kernel(random_moduli_point(dim, rng), sample_haar_unitary(dim, rng))
    r1, r2 = random_density_matrix(dim, rng), random_density_matrix(dim, rng)
    mix = a * r1.matrix + (1 - a) * r2.matrix
    assert wigner_value(mix, k) == pytest.approx(a * wigner_value(r1, k) + (1 - a) * wigner_value(r2, k), abs=1e-12)


@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_cartan_form_matches_trace(dim):
    rng = np.random.default_rng(100 + dim)
    basis = build_basis(dim)
    us = haar_unitaries(dim, 1000, rng)
    worst = 0.0
    for u in us:
        p = random_moduli_point(dim, rng)
        rho = random_density_matrix(dim, rng)
        direct = wigner_value(rho, build_kernel(p, u))
        worst = max(worst, abs(wigner_cartan(rho.bloch, p, u, basis) - direct))
    assert worst < 1e-12


def test_covariance(rng):
    p = random_moduli_point(4, rng)
    u, v = haar_unitaries(4, 2, rng)
    rho = random_density_matrix(4, rng).matrix
    k = build_kernel(p, u).matrix
    lhs = wigner_value(v @ rho @ v.conj().T, v @ k @ v.conj().T)
    assert lhs == pytest.approx(wigner_value(rho, k), abs=1e-13)


# -- Monte Carlo -------------------------------------------------------------


def test_sweep_mean_is_one_over_n():
    p = ModuliPoint.from_angles((0.4, 0.7), 4)
    rho = random_density_matrix(4, 1)
    w = wigner_sweep(rho, p, 50_000, seed=2)
    assert abs(w.mean() - 0.25) < 5 * w.std() / math.sqrt(w.size)


def test_overlap_identity():
    # N E[W_rho W_sigma] = tr(rho sigma)
    n, m = 3, 80_000
    p = ModuliPoint.from_angles((0.5,), n)
    rho, sigma = random_density_matrix(n, 3), random_density_matrix(n, 4)
    wr = wigner_sweep(rho, p, m, seed=5)
    ws = wigner_sweep(sigma, p, m, seed=5)
    prod = n * wr * ws
    exact = np.trace(rho.matrix @ sigma.matrix).real
    assert abs(prod.mean() - exact) < 5 * prod.std() / math.sqrt(m)


def test_sweep_independent_of_workers():
    p = ModuliPoint.from_angles((0.5,), 3)
    rho = random_density_matrix(3, 0)
    a = wigner_sweep(rho, p, 70_000, seed=9, workers=1)
    b = wigner_sweep(rho, p, 70_000, seed=9, workers=4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, wigner_sweep(rho, p, 70_000, seed=10))


def test_reconstruction_unbiased():
    n, m, reps = 2, 10_000, 20
    p = ModuliPoint.from_angles((), n)
    rho = random_density_matrix(n, 12)
    est = np.array([reconstruct_mc(rho, p, m, seed=s).estimate for s in range(reps)])
    mean, sd = est.mean(axis=0), est.std(axis=0, ddof=1)
    z = np.abs(mean - rho.matrix) / (sd / math.sqrt(reps) + 1e-15)
    assert np.max(z) < 4.5


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_reconstruction_error_shrinks(dim):
    rng = np.random.default_rng(dim)
    p = random_moduli_point(dim, rng)
    rho = random_density_matrix(dim, rng)
    small = np.median([reconstruct_mc(rho, p, 2_000, seed=(1, s)).error for s in range(8)])
    big = np.median([reconstruct_mc(rho, p, 32_000, seed=(2, s)).error for s in range(8)])
    # 16x the samples: about 4x smaller error
    assert 2 < small / big < 8


def test_reconstruction_needs_samples():
    with pytest.raises(ValueError, match="1000"):
        reconstruct_mc(np.eye(2) / 2, ModuliPoint.from_angles((), 2), 999)


# -- Weingarten --------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_weingarten_classic_entries(n):
    # E|U_11|^4 = 2/(N(N+1)) and E|U_11|^2 |U_22|^2 = 1/(N^2-1)
    assert weingarten_value(n, 0, 0, 0, 0, 0, 0, 0, 0) == pytest.approx(2 / (n * (n + 1)))
    assert weingarten_value(n, 0, 0, 1, 1, 0, 0, 1, 1) == pytest.approx(1 / (n * n - 1))
    # E[U_11 U_22 conj(U_12 U_21)] = -1/(N(N^2-1))
    assert weingarten_value(n, 0, 0, 1, 1, 0, 1, 1, 0) == pytest.approx(-1 / (n * (n * n - 1)))
    # unbalanced row indices vanish
    assert weingarten_value(n, 0, 0, 0, 0, 1, 0, 0, 0) == 0


def test_weingarten_tensor_matches_entries():
    t = weingarten_tensor(2)
    for idx in np.ndindex(*t.shape):
        assert t[idx] == pytest.approx(weingarten_value(2, *idx))


def test_weingarten_tensor_contraction():
    # rows are unit vectors: sum_{j,l} E|U_0j|^2 |U_0l|^2 = 1
    n = 3
    t = weingarten_tensor(n)
    total = sum(t[0, j, 0, l, 0, j, 0, l] for j in range(n) for l in range(n))
    assert total == pytest.approx(1.0)


def test_weingarten_check_small():
    assert weingarten_check(2, 20_000, seed=1) < 0.05
    with pytest.raises(ValueError):
        weingarten_check(2, 100)


# -- postulates --------------------------------------------------------------


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_postulates_hold(dim):
    rep = check_sw_postulates(random_moduli_point(dim, dim), trials=50, seed=dim)
    assert set(rep) == {"hermiticity", "covariance", "normalization", "reconstruction"}
    for name, r in rep.items():
        assert r.passed, (name, r)


def test_postulates_deterministic():
    p = ModuliPoint.from_angles((0.3,), 3)
    a = check_sw_postulates(p, trials=10, seed=4, samples=2000)
    b = check_sw_postulates(p, trials=10, seed=np.random.SeedSequence(4), samples=2000)
    assert a == b
