"""Spherical-angle parametrization of the kernel moduli space.

A kernel spectrum is fixed by the Cartan coefficients ``mu = (mu_3, mu_8, ...,
mu_{N^2-1})`` lying on the unit (N-2)-sphere.  The sphere is charted by angles
``psi_1 .. psi_{N-2}``::

    mu_{N^2-1} = cos psi_1
    mu_{i^2-1} = sin psi_1 ... sin psi_{N-i} cos psi_{N-i+1}
    mu_3       = sin psi_1 ... sin psi_{N-2}

Descending order of the spectrum cuts out a spherical simplex.  All array
functions broadcast over leading axes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .algebra import _check_dim
from .errors import ConstraintViolationError

ORDER_TOL = 1e-12
SPHERE_TOL = 1e-10


def kappa(dim: int) -> float:
    """Normalization ``sqrt(N(N^2-1)/2)`` of the traceless part of a kernel."""
    return float(np.sqrt(dim * (dim * dim - 1) / 2.0))


def ordering_ratios(dim: int) -> np.ndarray:
    """``sqrt((i-1)/(i+1))`` for i = 2..N-1, the slopes of the ordering facets."""
    i = np.arange(2, dim)
    return np.sqrt((i - 1) / (i + 1))


def angles_to_mu(angles, dim: int) -> np.ndarray:
    dim = _check_dim(dim)
    psi = np.asarray(angles, dtype=float)
    if dim == 2:
        return np.ones(psi.shape[:-1] + (1,)) if psi.ndim else np.ones(1)
    if psi.shape[-1] != dim - 2:
        raise ValueError(f"expected {dim - 2} angles for dim={dim}, got {psi.shape[-1]}")
    s, c = np.sin(psi), np.cos(psi)
    # prefix[..., m] = sin psi_1 ... sin psi_m
    ones = np.ones(psi.shape[:-1] + (1,))
    prefix = np.concatenate([ones, np.cumprod(s, axis=-1)], axis=-1)
    mu = np.empty(psi.shape[:-1] + (dim - 1,))
    mu[..., 0] = prefix[..., dim - 2]
    for i in range(3, dim + 1):
        mu[..., i - 2] = prefix[..., dim - i] * c[..., dim - i]
    return mu


def mu_to_angles(mu) -> np.ndarray:
    """Inverse chart: angles in ``[0, pi]`` (last one in ``[0, 2 pi)``).

    Angles that become irrelevant because an earlier sine vanishes are set to 0.
    """
    mu = np.asarray(mu, dtype=float)
    dim = mu.shape[-1] + 1
    psi = np.zeros(mu.shape[:-1] + (max(dim - 2, 0),))
    for j in range(1, dim - 2):
        c = dim - j - 1  # position of the coefficient carrying cos psi_j
        psi[..., j - 1] = np.arctan2(np.linalg.norm(mu[..., :c], axis=-1), mu[..., c])
    if dim > 2:
        psi[..., -1] = np.mod(np.arctan2(mu[..., 0], mu[..., 1]), 2 * np.pi)
    sin_zero = np.abs(np.sin(psi)) < 1e-15
    hidden = (np.cumsum(sin_zero, axis=-1) - sin_zero) > 0
    return np.where(hidden, 0.0, psi)


def _check_sphere(mu: np.ndarray, tol: float = SPHERE_TOL) -> None:
    resid = np.abs(np.sum(mu * mu, axis=-1) - 1.0)
    if np.any(resid > tol):
        raise ConstraintViolationError(
            f"moduli coefficients must lie on the unit sphere (|sum mu^2 - 1| = {np.max(resid):.3e})"
        )


def mu_to_spectrum(mu, dim: int | None = None) -> np.ndarray:
    """Kernel eigenvalues ``pi_1 .. pi_N`` for Cartan coefficients ``mu``.

    ``pi_i = (1/N)(1 + sqrt2 kappa sum_{s>i} mu_s/sqrt(s(s-1)) - kappa sqrt(2(i-1)/i) mu_i)``
    with ``mu_s`` short for ``mu_{s^2-1}``.  Sorted descending exactly when
    ``check_ordering`` holds.
    """
    mu = np.asarray(mu, dtype=float)
    dim = mu.shape[-1] + 1 if dim is None else _check_dim(dim)
    if mu.shape[-1] != dim - 1:
        raise ValueError(f"expected {dim - 1} coefficients for dim={dim}")
    _check_sphere(mu)
    k = kappa(dim)
    s = np.arange(2, dim + 1)
    up = np.sqrt(2.0) * k * mu / np.sqrt(s * (s - 1))
    # tail[..., i] = sum_{s=i+1}^{N} up_s   (i = 1..N)
    tail = np.concatenate([np.cumsum(up[..., ::-1], axis=-1)[..., ::-1], np.zeros(mu.shape[:-1] + (1,))], axis=-1)
    pis = np.empty(mu.shape[:-1] + (dim,))
    pis[..., 0] = 1.0 + tail[..., 0]
    for i in range(2, dim + 1):
        pis[..., i - 1] = 1.0 + tail[..., i - 1] - k * np.sqrt(2.0 * (i - 1) / i) * mu[..., i - 2]
    return pis / dim


def spectrum_to_mu(spectrum) -> np.ndarray:
    """Cartan coefficients of ``diag(spectrum)``; the inverse of ``mu_to_spectrum``."""
    pis = np.asarray(spectrum, dtype=float)
    dim = pis.shape[-1]
    k = kappa(dim)
    mu = np.empty(pis.shape[:-1] + (dim - 1,))
    for s in range(2, dim + 1):
        # tr(diag(pi) l_s) = sqrt(2/(s(s-1))) (sum_{j<s} pi_j - (s-1) pi_s)
        t = np.sqrt(2.0 / (s * (s - 1))) * (np.sum(pis[..., : s - 1], axis=-1) - (s - 1) * pis[..., s - 1])
        mu[..., s - 2] = dim * t / (2.0 * k)
    return mu


def check_ordering(mu, dim: int | None = None, tol: float = ORDER_TOL):
    """``mu_3 >= 0`` and ``mu_{(i+1)^2-1} >= sqrt((i-1)/(i+1)) mu_{i^2-1}``."""
    mu = np.asarray(mu, dtype=float)
    dim = mu.shape[-1] + 1 if dim is None else dim
    ok = mu[..., 0] >= -tol
    if dim > 2:
        ok = ok & np.all(mu[..., 1:] - ordering_ratios(dim) * mu[..., :-1] >= -tol, axis=-1)
    return ok if np.ndim(ok) else bool(ok)


@dataclass(frozen=True)
class ModuliPoint:
    dim: int
    angles: tuple[float, ...]
    mu: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def from_angles(cls, angles, dim: int) -> "ModuliPoint":
        angles = tuple(float(a) for a in np.atleast_1d(np.asarray(angles, dtype=float)))
        if dim == 2:
            angles = ()
        mu = angles_to_mu(np.array(angles), dim)
        return cls(dim, angles, mu)

    @classmethod
    def from_mu(cls, mu) -> "ModuliPoint":
        mu = np.asarray(mu, dtype=float)
        _check_sphere(mu)
        return cls(mu.size + 1, tuple(float(a) for a in mu_to_angles(mu)), mu.copy())

    @classmethod
    def from_spectrum(cls, spectrum) -> "ModuliPoint":
        return cls.from_mu(spectrum_to_mu(spectrum))

    def spectrum(self) -> np.ndarray:
        return mu_to_spectrum(self.mu, self.dim)

    def is_ordered(self) -> bool:
        return check_ordering(self.mu, self.dim)


class RegionMembership(NamedTuple):
    in_region: bool
    subregion: str  # "P1", "P2(k)", "P3" or "outside"


OUTSIDE = RegionMembership(False, "outside")


def classify_region(point: ModuliPoint | tuple, dim: int | None = None, tol: float = ORDER_TOL) -> RegionMembership:
    """Label a point by the angular subregion of the admissible simplex.

    Works directly on the angles:

    * ``P1``: ``psi_1 = 0`` (the all-zero-but-last coefficient point);
    * ``P2(k)``: ``sin psi_{N-k} = 0`` for the largest such k in 2..N-2, with
      ``cos psi_{N-k} > 0``, the leading angles strictly inside ``(0, pi)`` and
      ``cot psi_{N-i} >= sqrt((i-1)/(i+1)) cos psi_{N-i+1}`` for i = k+1..N-1;
    * ``P3``: ``0 < psi_{N-2} <= pi/3``, other angles inside ``(0, pi)`` and the
      cotangent inequalities for i = 3..N-1.
    """
    if isinstance(point, ModuliPoint):
        dim, psi = point.dim, np.asarray(point.angles, dtype=float)
    else:
        psi = np.asarray(point, dtype=float)
        dim = psi.size + 2 if dim is None else dim
    if dim == 2:
        return RegionMembership(True, "P1")

    n2 = dim - 2
    sin = lambda j: np.sin(psi[j - 1])  # noqa: E731  (1-based helpers)
    cos = lambda j: np.cos(psi[j - 1])  # noqa: E731
    zero = lambda j: abs(sin(j)) <= tol  # noqa: E731

    def cot_ok(i: int) -> bool:
        j = dim - i
        return cos(j) - np.sqrt((i - 1) / (i + 1)) * cos(j + 1) * sin(j) >= -tol * max(1.0, abs(sin(j)))

    def interior(j: int) -> bool:
        return tol < psi[j - 1] < np.pi - tol

    if zero(1):
        return RegionMembership(True, "P1") if cos(1) > 0 else OUTSIDE

    for k in range(n2, 1, -1):
        if zero(dim - k):
            ok = (
                cos(dim - k) > 0
                and sin(dim - k - 1) * cos(dim - k) > 0
                and all(interior(i - k) for i in range(k + 1, dim))
                and all(cot_ok(i) for i in range(k + 1, dim))
            )
            return RegionMembership(True, f"P2({k})") if ok else OUTSIDE

    ok = (
        tol < psi[n2 - 1] <= np.pi / 3 + tol
        and all(interior(j) for j in range(1, n2))
        and all(cot_ok(i) for i in range(3, dim))
    )
    return RegionMembership(True, "P3") if ok else OUTSIDE


def _angle_bounds(dim: int):
    """Upper bound on each angle inside the simplex, given the later angles.

    Returns a function ``upper(j, later)`` for 1-based angle index ``j``.
    """
    def upper(j: int, nxt: float | None) -> float:
        if j == dim - 2:
            return np.pi / 3
        i = dim - j
        c = np.sqrt((i - 1) / (i + 1)) * np.cos(nxt)
        return float(np.arctan2(1.0, c))  # arccot(c), c >= 0 inside the simplex

    return upper


def sample_moduli_grid(dim: int, resolution: int) -> list[ModuliPoint]:
    """Equal-angle grid over the admissible simplex.

    The outer angle ``psi_{N-2}`` runs over ``[0, pi/3]``; each inner angle runs
    over ``[0, arccot(sqrt((i-1)/(i+1)) cos psi_{N-i+1})]``, so the simplex
    boundary and its vertices are sampled exactly.  Points that coincide
    because a vanishing sine hides later angles are reported once.
    """
    dim = _check_dim(dim)
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if dim == 2:
        return [ModuliPoint.from_angles((), 2)]
    upper = _angle_bounds(dim)
    n2 = dim - 2

    tuples = []

    def rec(j: int, later: list[float]):
        nxt = later[0] if later else None
        for a in np.linspace(0.0, upper(j, nxt), resolution):
            cur = [float(a)] + later
            if j == 1:
                tuples.append(cur)
            else:
                rec(j - 1, cur)

    rec(n2, [])
    seen = set()
    out = []
    for t in tuples:
        # canonical form: zero the angles hidden behind a vanishing sine
        canon = list(t)
        for j, a in enumerate(canon):
            if a == 0.0 and j < n2 - 1:
                canon[j + 1 :] = [0.0] * (n2 - j - 1)
                break
        key = tuple(canon)
        if key in seen:
            continue
        seen.add(key)
        p = ModuliPoint.from_angles(canon, dim)
        if p.is_ordered():
            out.append(p)
    return out


def sample_sphere(dim: int, size: int, rng=None) -> np.ndarray:
    """Uniform points on the coefficient sphere, shape ``(size, dim - 1)``."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    x = rng.standard_normal((size, dim - 1))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def random_moduli_point(dim: int, rng=None) -> ModuliPoint:
    """Uniformly distributed point of the admissible region (by rejection)."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    if dim == 2:
        return ModuliPoint.from_angles((), 2)
    while True:
        batch = sample_sphere(dim, 256, rng)
        hits = batch[check_ordering(batch, dim)]
        if len(hits):
            return ModuliPoint.from_mu(hits[0])


def admissible_area_fraction(dim: int, samples: int, rng=None) -> float:
    """Fraction of the coefficient sphere occupied by the admissible simplex."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    hits = 0
    chunk = 1 << 18
    for start in range(0, samples, chunk):
        n = min(chunk, samples - start)
        hits += int(np.count_nonzero(check_ordering(sample_sphere(dim, n, rng), dim)))
    return hits / samples

