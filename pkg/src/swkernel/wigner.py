"""Wigner functions as the pairing ``W = tr(rho Delta)`` and Haar Monte Carlo checks.

Phase-space points are represented by full SU(N) elements ``U``; the kernel
at that point is ``U P U^H`` for a fixed diagonal kernel ``P``.  Since the
isotropy group of ``P`` acts trivially, nothing depends on the choice of
coset representative.

Monte Carlo routines split the sample budget into fixed-size chunks, each
driven by its own generator spawned from ``SeedSequence(seed)``.  Results
therefore depend on ``(seed, samples)`` only, not on the worker count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .algebra import GellMannBasis, as_hermitian, build_basis, haar_unitaries
from .errors import ContractViolationError
from .kernels import SWKernel, build_kernel, diagonal_kernel
from .moduli import ModuliPoint

PSD_TOL = 1e-10
TRACE_TOL = 1e-12
CHUNK = 1 << 15


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = as_hermitian(self.matrix)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ContractViolationError(f"density matrix trace is {tr!r}, expected 1 (residual {abs(tr - 1):.3e})")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < -PSD_TOL:
            raise ContractViolationError(f"density matrix is not positive semidefinite (min eigenvalue {lo:.3e})")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def bloch(self) -> np.ndarray:
        return to_bloch(self)

    @classmethod
    def from_bloch(cls, xi, basis: GellMannBasis | None = None) -> "DensityMatrix":
        return cls(bloch_to_matrix(xi, basis))

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


def _as_rho(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def _as_kernel_matrix(k) -> np.ndarray:
    return k.matrix if isinstance(k, SWKernel) else np.asarray(k, dtype=complex)


def random_density_matrix(dim: int, rng=None, rank: int | None = None) -> DensityMatrix:
    """Random state from a ``dim x rank`` Ginibre matrix (full rank by default)."""
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real)


def bloch_scale(dim: int) -> float:
    """``sqrt(N(N-1)/2)``: with it, pure states have unit Bloch vectors."""
    return float(np.sqrt(dim * (dim - 1) / 2.0))


def to_bloch(rho, basis: GellMannBasis | None = None) -> np.ndarray:
    """Bloch vector ``xi_a = tr(rho l_a) / sqrt(2(N-1)/N)``."""
    m = _as_rho(rho)
    n = m.shape[0]
    basis = basis or build_basis(n)
    t = np.einsum("aij,ji->a", basis.elements, m).real
    return t / np.sqrt(2.0 * (n - 1) / n)


def bloch_to_matrix(xi, basis: GellMannBasis | None = None) -> np.ndarray:
    """``(1/N)(I + sqrt(N(N-1)/2) sum_a xi_a l_a)``."""
    xi = np.asarray(xi, dtype=float)
    n = int(round(np.sqrt(xi.size + 1)))
    basis = basis or build_basis(n)
    return (np.eye(n) + bloch_scale(n) * np.tensordot(xi, basis.elements, axes=1)) / n


def wigner_value(rho, k) -> float:
    """``W_rho = tr(rho Delta)``."""
    r, d = _as_rho(rho), _as_kernel_matrix(k)
    if r.shape != d.shape:
        raise ContractViolationError(f"state shape {r.shape} does not match kernel shape {d.shape}")
    w = np.einsum("ij,ji->", r, d)
    if abs(w.imag) > 1e-12 * max(1.0, abs(w.real)):
        raise ContractViolationError(f"Wigner value has imaginary part {w.imag:.3e}; inputs not Hermitian?")
    return float(w.real)


def cartan_directions(u, basis: GellMannBasis) -> np.ndarray:
    """Unit vectors ``n^(s)_a = (1/2) tr(U l_{s^2-1} U^H l_a)``, shape ``(N-1, N^2-1)``."""
    u = np.asarray(u, dtype=complex)
    rot = u @ basis.cartan() @ u.conj().T
    return 0.5 * np.einsum("sij,aji->sa", rot, basis.elements).real


def wigner_cartan(xi, point: ModuliPoint, u, basis: GellMannBasis | None = None) -> float:
    """``W = (1/N)[1 + (N^2-1)/sqrt(N+1) (n, xi)]`` with ``n = sum_s mu_s n^(s)``."""
    n = point.dim
    basis = basis or build_basis(n)
    nvec = point.mu @ cartan_directions(u, basis)
    return float((1.0 + (n * n - 1) / np.sqrt(n + 1) * (nvec @ np.asarray(xi, dtype=float))) / n)


def _seed_seq(seed) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def _chunk_rngs(seed, samples: int) -> list[tuple[np.random.Generator, int]]:
    sizes = [CHUNK] * (samples // CHUNK) + ([samples % CHUNK] if samples % CHUNK else [])
    seqs = _seed_seq(seed).spawn(len(sizes))
    return [(np.random.default_rng(s), n) for s, n in zip(seqs, sizes)]


def _map_chunks(fn, seed, samples: int, workers: int):
    jobs = _chunk_rngs(seed, samples)
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(lambda j: fn(*j), jobs))
    return [fn(*j) for j in jobs]


def _kernel_stack(p_diag: np.ndarray, us: np.ndarray) -> np.ndarray:
    return np.einsum("mik,k,mjk->mij", us, p_diag, us.conj())


def wigner_sweep(rho, point: ModuliPoint, samples: int, seed=None, workers: int = 1) -> np.ndarray:
    """Wigner values at ``samples`` Haar-random phase-space points."""
    r = _as_rho(rho)
    p = np.real(np.diag(diagonal_kernel(point)))

    def run(rng, m):
        us = haar_unitaries(point.dim, m, rng)
        return np.einsum("mik,k,mjk,ji->m", us, p, us.conj(), r).real

    return np.concatenate(_map_chunks(run, seed, samples, workers))


class Reconstruction(NamedTuple):
    estimate: np.ndarray
    error: float


def _reconstruct(r: np.ndarray, point: ModuliPoint, samples: int, seed, workers: int) -> Reconstruction:
    n = point.dim
    p = np.real(np.diag(diagonal_kernel(point)))

    def run(rng, m):
        d = _kernel_stack(p, haar_unitaries(n, m, rng))
        w = np.einsum("mij,ji->m", d, r).real
        return np.einsum("m,mij->ij", w, d)

    partial = np.array(_map_chunks(run, seed, samples, workers))
    est = n * np.sum(partial, axis=0) / samples
    est = (est + est.conj().T) / 2
    return Reconstruction(est, float(np.linalg.norm(est - r, 2)))


def reconstruct_mc(rho, point: ModuliPoint, samples: int, seed=None, workers: int = 1) -> Reconstruction:
    """Monte Carlo estimate of ``rho = N E_U[Delta(U) tr(rho Delta(U))]``.

    ``error`` is the spectral norm of ``estimate - rho``; it decays like
    ``samples**-0.5``.
    """
    if samples < 1000:
        raise ValueError("reconstruction needs at least 1000 samples")
    return _reconstruct(_as_rho(rho), point, samples, seed, workers)


# -- Weingarten ---------------------------------------------------------------


def weingarten_tensor(dim: int) -> np.ndarray:
    """Exact ``E[U_{i1 j1} U_{i2 j2} conj(U_{k1 l1}) conj(U_{k2 l2})]``.

    Axes are ordered ``(i1, j1, i2, j2, k1, l1, k2, l2)``.
    """
    n = dim
    e = np.eye(n)
    t1 = np.einsum("ae,bf,cg,dh->abcdefgh", e, e, e, e)
    t2 = np.einsum("ag,bh,ce,df->abcdefgh", e, e, e, e)
    t3 = np.einsum("ae,bh,cg,df->abcdefgh", e, e, e, e)
    t4 = np.einsum("ag,bf,ce,dh->abcdefgh", e, e, e, e)
    return (t1 + t2) / (n * n - 1) - (t3 + t4) / (n * (n * n - 1))


def weingarten_value(dim: int, i1, j1, i2, j2, k1, l1, k2, l2) -> float:
    """Single entry of ``weingarten_tensor`` (0-based indices)."""
    d = lambda a, b: float(a == b)  # noqa: E731
    n = dim
    plus = d(i1, k1) * d(i2, k2) * d(j1, l1) * d(j2, l2) + d(i1, k2) * d(i2, k1) * d(j1, l2) * d(j2, l1)
    minus = d(i1, k1) * d(i2, k2) * d(j1, l2) * d(j2, l1) + d(i1, k2) * d(i2, k1) * d(j1, l1) * d(j2, l2)
    return plus / (n * n - 1) - minus / (n * (n * n - 1))


def haar_fourth_moments(dim: int, samples: int, seed=None, workers: int = 1) -> np.ndarray:
    """Monte Carlo estimate of ``weingarten_tensor(dim)``."""
    n = dim

    def run(rng, m):
        us = haar_unitaries(n, m, rng)
        a = np.einsum("mab,mcd->mabcd", us, us).reshape(m, -1)
        return a.T @ a.conj()

    total = np.sum(np.array(_map_chunks(run, seed, samples, workers)), axis=0) / samples
    return total.reshape((n,) * 8)


def weingarten_check(dim: int, samples: int, seed=None, workers: int = 1) -> float:
    """Max absolute deviation between sampled and exact fourth moments."""
    if samples < 10_000:
        raise ValueError("weingarten_check needs at least 10^4 samples")
    mc = haar_fourth_moments(dim, samples, seed, workers)
    return float(np.max(np.abs(mc - weingarten_tensor(dim))))


# -- postulates ---------------------------------------------------------------


class CheckResult(NamedTuple):
    residual: float
    tolerance: float
    passed: bool


def _check(residual: float, tol: float) -> CheckResult:
    return CheckResult(float(residual), float(tol), bool(residual < tol))


def normalization_tolerance(samples: int) -> float:
    return 5.0 / np.sqrt(samples)


def reconstruction_tolerance(dim: int, samples: int) -> float:
    # observed residuals are about 2 N / sqrt(M)
    return 5.0 * dim / np.sqrt(samples)


def check_sw_postulates(point: ModuliPoint, trials: int = 100, seed=None, samples: int = 10_000) -> dict[str, CheckResult]:
    """Numerically check the four correspondence postulates for ``point``.

    * ``hermiticity``: max ``|D - D^H|`` of ``U P U^H`` over ``trials`` unitaries;
    * ``covariance``: max ``|W_{V rho V^H}(D) - W_rho(V^H D V)|``;
    * ``normalization``: ``|mean_U W_rho(U) - 1/N|`` over ``samples`` Haar points;
    * ``reconstruction``: spectral norm of the Monte Carlo reconstruction error.
    """
    n = point.dim
    ss = _seed_seq(seed)
    s_herm, s_cov, s_norm, s_rec = ss.spawn(4)
    p = diagonal_kernel(point)

    us = haar_unitaries(n, trials, np.random.default_rng(s_herm))
    raw = us @ p @ np.conj(np.swapaxes(us, 1, 2))
    herm = float(np.max(np.abs(raw - np.conj(np.swapaxes(raw, 1, 2)))))

    rng = np.random.default_rng(s_cov)
    cov = 0.0
    for _ in range(trials):
        rho = random_density_matrix(n, rng).matrix
        v, u = haar_unitaries(n, 2, rng)
        d = build_kernel(point, u).matrix
        lhs = np.trace(v @ rho @ v.conj().T @ d).real
        rhs = np.trace(rho @ v.conj().T @ d @ v).real
        cov = max(cov, abs(lhs - rhs))

    rng_norm = np.random.default_rng(s_norm)
    rho = random_density_matrix(n, rng_norm)
    mean_w = float(np.mean(wigner_sweep(rho, point, samples, rng_norm.integers(2**63))))

    rec_rng = np.random.default_rng(s_rec)
    rho_rec = random_density_matrix(n, rec_rng)
    rec = _reconstruct(rho_rec.matrix, point, samples, rec_rng.integers(2**63), 1)

    return {
        "hermiticity": _check(herm, 1e-13),
        "covariance": _check(cov, 1e-12),
        "normalization": _check(abs(mean_w - 1.0 / n), normalization_tolerance(samples)),
        "reconstruction": _check(rec.error, reconstruction_tolerance(n, samples)),
    }
