"""Coadjoint-orbit strata of SW kernels.

Strata are written in Arnold's bar notation: the positions ``1..N`` of the
descending spectrum, with a bar between neighbours whose eigenvalues
coincide.  A regular quatrit is ``1234``; ``1|23|4`` has ``pi_1 = pi_2`` and
``pi_3 = pi_4``.  The orbit dimension follows from the block sizes and is
cross-checked against the rank of the Gram matrix of the tangent vectors
``t_k = [l_k, Delta]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import GellMannBasis, build_basis, eigvals_desc
from .errors import InconsistentStratumError
from .kernels import SWKernel
from .moduli import ordering_ratios

STRATUM_TOL = 1e-9


@dataclass(frozen=True)
class Stratum:
    pattern: str
    blocks: tuple[int, ...]
    orbit_dim: int
    isotropy_dim: int

    @classmethod
    def from_blocks(cls, blocks) -> "Stratum":
        blocks = tuple(int(b) for b in blocks)
        n = sum(blocks)
        iso = sum(b * b for b in blocks) - 1
        return cls(arnold_pattern(blocks), blocks, n * n - 1 - iso, iso)

    @property
    def is_regular(self) -> bool:
        return all(b == 1 for b in self.blocks)


def arnold_pattern(blocks) -> str:
    """``(2, 2) -> "1|23|4"``, ``(1, 1, 1) -> "123"``."""
    out, pos = [], 1
    for b in blocks:
        if out:
            out.append("")  # distinct neighbours: no separator
        run = [str(p) for p in range(pos, pos + b)]
        out.append("|".join(run))
        pos += b
    return "".join(out)


def degeneracy_blocks(spectrum, tol: float = STRATUM_TOL) -> tuple[int, ...]:
    """Group a descending spectrum into runs of equal eigenvalues.

    Single linkage: neighbours closer than ``tol * N * max(1, max|pi|)`` join.
    """
    spec = np.sort(np.asarray(spectrum, dtype=float))[::-1]
    n = spec.size
    gap = tol * n * max(1.0, float(np.max(np.abs(spec))))
    blocks, run = [], 1
    for a, b in zip(spec, spec[1:]):
        if a - b <= gap:
            run += 1
        else:
            blocks.append(run)
            run = 1
    blocks.append(run)
    return tuple(blocks)


@dataclass(frozen=True)
class GramMatrix:
    matrix: np.ndarray = field(repr=False)
    rank: int


def tangent_vectors(m, basis: GellMannBasis) -> np.ndarray:
    """Commutators ``[l_k, m]`` for every basis element, shape ``(N^2-1, N, N)``."""
    el = basis.elements
    return el @ m - m @ el


def gram_from_matrix(m, basis: GellMannBasis | None = None) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    basis = basis or build_basis(m.shape[0])
    t = tangent_vectors(m, basis)
    flat = t.reshape(len(basis), -1)
    # (1/2) tr(t_k^H t_l)
    g = 0.5 * (flat.conj() @ flat.T)
    return ((g + g.conj().T) / 2).real


def numerical_rank(g: np.ndarray, tol: float = STRATUM_TOL) -> int:
    w = np.linalg.eigvalsh(g)
    top = float(np.max(np.abs(w), initial=0.0))
    if top == 0.0:
        return 0
    return int(np.count_nonzero(w > tol * top))


def gram_matrix(k: SWKernel | np.ndarray, basis: GellMannBasis | None = None, tol: float = STRATUM_TOL) -> GramMatrix:
    """Gram matrix ``G_kl = (1/2) tr(t_k^H t_l)`` of the orbit tangent vectors."""
    m = k.matrix if isinstance(k, SWKernel) else np.asarray(k, dtype=complex)
    g = gram_from_matrix(m, basis)
    return GramMatrix(g, numerical_rank(g, tol))


def classify_stratum(k: SWKernel | np.ndarray, tol: float = STRATUM_TOL) -> Stratum:
    """Stratum from eigenvalue clustering, verified against the Gram rank."""
    if isinstance(k, SWKernel):
        spec, m = k.spectrum, k.matrix
    else:
        m = np.asarray(k, dtype=complex)
        spec = eigvals_desc(m)
    st = Stratum.from_blocks(degeneracy_blocks(spec, tol))
    rank = gram_matrix(m, tol=tol).rank
    if rank != st.orbit_dim:
        raise InconsistentStratumError(
            f"pattern {st.pattern} implies orbit dimension {st.orbit_dim} but Gram rank is {rank} (tol={tol:g})"
        )
    return st


@dataclass(frozen=True)
class OrbitCone:
    """Polyhedral cone ``{x : facet_normals @ x >= 0}`` of ordered Cartan coefficients."""

    dim: int
    facet_normals: np.ndarray = field(repr=False)

    def contains(self, x, tol: float = 1e-12) -> bool:
        return bool(np.all(self.facet_normals @ np.asarray(x, dtype=float) >= -tol))


def orbit_cone(dim: int) -> OrbitCone:
    """Lower-bidiagonal facet matrix: ones on the diagonal, ``-sqrt((i-1)/(i+1))`` below."""
    a = np.eye(dim - 1)
    if dim > 2:
        a[np.arange(1, dim - 1), np.arange(dim - 2)] = -ordering_ratios(dim)
    a.setflags(write=False)
    return OrbitCone(dim, a)


def cone_membership(mu, dim: int | None = None, tol: float = 1e-12) -> bool:
    mu = np.asarray(mu, dtype=float)
    dim = mu.size + 1 if dim is None else dim
    return orbit_cone(dim).contains(mu, tol)


def cone_face(mu, dim: int | None = None, tol: float = 1e-12) -> tuple[int, ...]:
    """Indices (0-based) of the facets on which ``mu`` lies."""
    mu = np.asarray(mu, dtype=float)
    dim = mu.size + 1 if dim is None else dim
    r = orbit_cone(dim).facet_normals @ mu
    return tuple(int(i) for i in np.flatnonzero(np.abs(r) <= tol))


