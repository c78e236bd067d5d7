"""Generalized Gell-Mann basis, Hermitian helpers and Haar sampling.

Basis elements are normalized as ``tr(l_a l_b) = 2 delta_ab`` and ordered so
that the diagonal (Cartan) generators sit at the 1-based labels ``s**2 - 1``
(3, 8, 15, ...), as in the familiar Pauli / Gell-Mann listings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import ContractViolationError, InvalidDimensionError

HERMITIAN_TOL = 1e-12


def _check_dim(dim) -> int:
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def as_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``m`` as a complex square array, raising if it is not Hermitian."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {m.shape}")
    resid = float(np.max(np.abs(m - m.conj().T), initial=0.0))
    if resid > tol:
        raise ContractViolationError(f"matrix is not Hermitian (max |M - M^H| = {resid:.3e})")
    return m


def cartan_generator(s: int, dim: int) -> np.ndarray:
    """Diagonal generator ``l_{s^2-1}``: ``sqrt(2/(s(s-1))) diag(1,..,1,-(s-1),0,..)``."""
    if not 2 <= s <= dim:
        raise InvalidDimensionError(f"need 2 <= s <= dim, got s={s}, dim={dim}")
    d = np.zeros(dim)
    d[: s - 1] = 1.0
    d[s - 1] = -(s - 1)
    return np.diag(d * np.sqrt(2.0 / (s * (s - 1)))).astype(complex)


@dataclass(frozen=True)
class GellMannBasis:
    """Ordered su(N) basis.

    ``elements[a - 1]`` is the generator with 1-based label ``a``.
    """

    dim: int
    elements: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.dim**2 - 1

    @property
    def cartan_labels(self) -> tuple[int, ...]:
        return tuple(s * s - 1 for s in range(2, self.dim + 1))

    @property
    def cartan_positions(self) -> tuple[int, ...]:
        """0-based positions of the Cartan generators in ``elements``."""
        return tuple(a - 1 for a in self.cartan_labels)

    def element(self, label: int) -> np.ndarray:
        return self.elements[label - 1]

    def cartan(self) -> np.ndarray:
        return self.elements[list(self.cartan_positions)]

    def coefficients(self, m) -> np.ndarray:
        """Real coordinates ``tr(m l_a) / 2`` of a traceless Hermitian ``m``."""
        m = np.asarray(m)
        return np.einsum("aij,...ji->...a", self.elements, m).real / 2.0

    def __len__(self) -> int:
        return self.size


@lru_cache(maxsize=None)
def _basis_elements(dim: int) -> np.ndarray:
    out = []
    for s in range(2, dim + 1):
        k = s - 1  # new row/column index (0-based)
        for j in range(k):
            sym = np.zeros((dim, dim), complex)
            sym[j, k] = sym[k, j] = 1.0
            anti = np.zeros((dim, dim), complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            out += [sym, anti]
        out.append(cartan_generator(s, dim))
    arr = np.array(out)
    arr.setflags(write=False)
    return arr


def build_basis(dim: int) -> GellMannBasis:
    """Generalized Gell-Mann basis of su(dim)."""
    dim = _check_dim(dim)
    return GellMannBasis(dim, _basis_elements(dim))


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def _fix_phases(vecs: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    vecs = vecs.copy()
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        nz = np.flatnonzero(np.abs(col) > tol)
        if nz.size:
            c = col[nz[0]]
            vecs[:, j] = col * (abs(c) / c)
    return vecs


def spectral_decompose(m) -> SpectralDecomposition:
    """Eigen-decomposition with eigenvalues sorted in descending order.

    Each eigenvector is rotated so its first non-negligible component is
    positive real, which makes repeated calls bitwise reproducible.
    """
    m = as_hermitian(m)
    w, v = np.linalg.eigh(m)
    return SpectralDecomposition(w[::-1].copy(), _fix_phases(v[:, ::-1]))


def eigvals_desc(m) -> np.ndarray:
    return np.linalg.eigvalsh(as_hermitian(m))[::-1]


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_unitaries(dim: int, size: int, rng=None) -> np.ndarray:
    """Stack of ``size`` Haar-distributed SU(dim) matrices, shape ``(size, dim, dim)``.

    QR of a complex Ginibre matrix with the phases of ``diag(R)`` absorbed into
    ``Q``, followed by a global phase so that ``det = 1``.
    """
    dim = _check_dim(dim)
    rng = _rng(rng)
    z = rng.standard_normal((size, dim, dim)) + 1j * rng.standard_normal((size, dim, dim))
    q, r = np.linalg.qr(z / np.sqrt(2.0))
    d = np.diagonal(r, axis1=1, axis2=2)
    q = q * (d / np.abs(d))[:, None, :]
    det = np.linalg.det(q)
    q = q * (det ** (-1.0 / dim))[:, None, None]
    return q


def sample_haar_unitary(dim: int, rng_seed=None) -> np.ndarray:
    """A single Haar-random element of SU(dim); deterministic for a given seed."""
    return haar_unitaries(dim, 1, rng_seed)[0]


def random_hermitian(dim: int, rng=None) -> np.ndarray:
    rng = _rng(rng)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2.0
