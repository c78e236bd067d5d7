"""Stratonovich-Weyl kernels: construction, master equations, named families.

A kernel is ``Delta = U diag(pi) U^H`` with ``sum pi = 1`` and
``sum pi^2 = N``.  Named closed-form families for N = 2, 3, 4 are kept in
``FAMILIES``; every family spectrum is returned sorted in descending order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

from .algebra import as_hermitian, build_basis, eigvals_desc
from .errors import ContractViolationError, DomainError, MasterEquationError
from .moduli import ModuliPoint, kappa

MASTER_TOL = 1e-9
ZERO_TOL = 1e-9
ENDPOINT_MARGIN = 1e-12

SQ5 = math.sqrt(5.0)
SQ7 = math.sqrt(7.0)
SQ15 = math.sqrt(15.0)
SQ22 = math.sqrt(22.0)


class MasterReport(NamedTuple):
    trace_residual: float
    trace_sq_residual: float
    passed: bool


def verify_master(m, tol: float = MASTER_TOL) -> MasterReport:
    """Residuals of ``tr m = 1`` and ``tr m^2 = N``."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    r1 = abs(np.trace(m).real - 1.0)
    r2 = abs(np.einsum("ij,ji->", m, m).real - n)
    return MasterReport(float(r1), float(r2), bool(r1 < tol and r2 < tol))


@dataclass(frozen=True)
class SWKernel:
    dim: int
    matrix: np.ndarray = field(repr=False)
    spectrum: np.ndarray
    moduli: ModuliPoint | None = None

    @cached_property
    def stratum(self):
        from .orbits import classify_stratum

        return classify_stratum(self)

    def master(self) -> MasterReport:
        return verify_master(self.matrix)


def diagonal_kernel(point: ModuliPoint) -> np.ndarray:
    """``(1/N)[I + kappa sum_s mu_s l_{s^2-1}]`` for a moduli point."""
    basis = build_basis(point.dim)
    cart = np.tensordot(point.mu, basis.cartan(), axes=1)
    return (np.eye(point.dim) + kappa(point.dim) * cart) / point.dim


def build_kernel(point: ModuliPoint, u=None) -> SWKernel:
    """Kernel ``U P U^H`` with ``P`` the diagonal kernel of ``point``."""
    n = point.dim
    p = diagonal_kernel(point)
    if u is None:
        m = p
    else:
        u = np.asarray(u, dtype=complex)
        if u.shape != (n, n):
            raise ContractViolationError(f"unitary shape {u.shape} does not match dim {n}")
        if np.max(np.abs(u @ u.conj().T - np.eye(n))) > 1e-10:
            raise ContractViolationError("u is not unitary")
        m = u @ p @ u.conj().T
        m = (m + m.conj().T) / 2.0
    return SWKernel(n, m, np.sort(point.spectrum())[::-1], point)


def kernel_from_matrix(m, tol: float = MASTER_TOL) -> SWKernel:
    """Wrap a user-supplied matrix, requiring it to solve the master equations."""
    m = as_hermitian(m, tol=1e-10)
    rep = verify_master(m, tol)
    if not rep.passed:
        raise MasterEquationError(
            f"master equations violated: |tr - 1| = {rep.trace_residual:.3e}, "
            f"|tr^2 - N| = {rep.trace_sq_residual:.3e}"
        )
    return SWKernel(m.shape[0], m, eigvals_desc(m), None)


# -- named families -----------------------------------------------------------


def _root(x: float) -> float:
    # clamp absorbs roundoff at interval endpoints
    return math.sqrt(max(0.0, x))


def _qutrit(nu):
    d = _root((1 + nu) * (5 - 3 * nu))
    return [(1 - nu + d) / 2, (1 - nu - d) / 2, nu]


def _quatrit_regular(nu1, nu2):
    d = _root(7 + 2 * nu1 - 3 * nu1**2 + 2 * nu2 - 2 * nu1 * nu2 - 3 * nu2**2)
    return [(1 - nu1 - nu2 + d) / 2, (1 - nu1 - nu2 - d) / 2, nu1, nu2]


def _q_1_234(nu):
    d1 = _root(22 + 4 * nu - 8 * nu**2)
    top = (1 - nu) / 3 + d1 / 6
    return [top, top, nu, (1 - nu - d1) / 3]


def _q_12_34(nu):
    d2 = _root(7 + 4 * nu - 8 * nu**2)
    return [(1 - 2 * nu + d2) / 2, nu, nu, (1 - 2 * nu - d2) / 2]


def _q_123_4(nu):
    d2 = _root(7 + 4 * nu - 8 * nu**2)
    return [(1 - 2 * nu + d2) / 2, (1 - 2 * nu - d2) / 2, nu, nu]


def _q_1204(nu):
    d = _root(7 + 2 * nu - 3 * nu**2)
    return [(1 - nu + d) / 2, (1 - nu - d) / 2, 0.0, nu]


def _q_1034(nu):
    d = _root(7 + 2 * nu - 3 * nu**2)
    return [(1 - nu + d) / 2, 0.0, nu, (1 - nu - d) / 2]


def _quatrit_region_ok(nu1, nu2) -> bool:
    disc = 7 + 2 * nu1 - 3 * nu1**2 + 2 * nu2 - 2 * nu1 * nu2 - 3 * nu2**2
    if disc < -ENDPOINT_MARGIN:
        return False
    x = _quatrit_regular(nu1, nu2)
    return all(a >= b - ENDPOINT_MARGIN for a, b in zip(x, x[1:]))


class Interval(NamedTuple):
    lo: float
    hi: float
    text: str  # human-readable form for error messages


@dataclass(frozen=True)
class FamilySpec:
    name: str
    dim: int
    params: tuple[str, ...]
    formula: Callable[..., list]
    interval: Interval | None = None
    region: Callable[..., bool] | None = None
    region_text: str = ""
    aliases: tuple[str, ...] = ()


FAMILIES: dict[str, FamilySpec] = {
    f.name: f
    for f in [
        FamilySpec("qubit", 2, (), lambda: [(1 + math.sqrt(3)) / 2, (1 - math.sqrt(3)) / 2]),
        FamilySpec("qutrit", 3, ("nu",), _qutrit, Interval(-1.0, -1.0 / 3, "nu in (-1, -1/3)")),
        FamilySpec(
            "qutrit-golden", 3, (), lambda: [(1 + SQ5) / 2, 0.0, (1 - SQ5) / 2], aliases=("golden", "103")
        ),
        FamilySpec(
            "quatrit-regular", 4, ("nu1", "nu2"), _quatrit_regular,
            region=_quatrit_region_ok,
            region_text="(nu1, nu2) inside the curvilinear triangle ABC with vertices "
            "A=((1-sqrt5)/4, (1-sqrt5)/4), B=((1+sqrt5)/4, (1-3sqrt5)/4), C=((1-sqrt15)/4, (1-sqrt15)/4)",
            aliases=("quatrit", "regular"),
        ),
        FamilySpec(
            "quatrit-1|234", 4, ("nu",), _q_1_234,
            Interval((1 - SQ15) / 4, (1 + SQ5) / 4, "nu in ((1-sqrt15)/4, (1+sqrt5)/4)"), aliases=("1|234",),
        ),
        FamilySpec(
            "quatrit-12|34", 4, ("nu",), _q_12_34,
            Interval((1 - SQ5) / 4, (1 + SQ5) / 4, "nu in ((1-sqrt5)/4, (1+sqrt5)/4)"), aliases=("12|34",),
        ),
        FamilySpec(
            "quatrit-123|4", 4, ("nu",), _q_123_4,
            Interval((1 - SQ15) / 4, (1 - SQ5) / 4, "nu in ((1-sqrt15)/4, (1-sqrt5)/4)"), aliases=("123|4",),
        ),
        FamilySpec(
            "quatrit-1|2|34", 4, (), lambda: [(1 + SQ5) / 4] * 3 + [(1 - 3 * SQ5) / 4], aliases=("1|2|34",)
        ),
        FamilySpec(
            "quatrit-12|3|4", 4, (), lambda: [(1 + 3 * SQ5) / 4] + [(1 - SQ5) / 4] * 3, aliases=("12|3|4",)
        ),
        FamilySpec(
            "quatrit-1|23|4", 4, (), lambda: [(1 + SQ15) / 4] * 2 + [(1 - SQ15) / 4] * 2, aliases=("1|23|4",)
        ),
        FamilySpec(
            "quatrit-1204", 4, ("nu",), _q_1204,
            Interval((1 - SQ22) / 3, (1 - SQ7) / 2, "(1-sqrt22)/3 <= nu < (1-sqrt7)/2"), aliases=("1204",),
        ),
        FamilySpec(
            "quatrit-1034", 4, ("nu",), _q_1034,
            Interval((2 - SQ22) / 6, 0.0, "(2-sqrt22)/6 <= nu < 0"), aliases=("1034",),
        ),
        FamilySpec(
            "quatrit-1004", 4, (), lambda: [(1 + SQ7) / 2, 0.0, 0.0, (1 - SQ7) / 2], aliases=("1004",)
        ),
    ]
}

_ALIASES = {a: f.name for f in FAMILIES.values() for a in f.aliases}


def resolve_family(name: str) -> FamilySpec:
    key = _ALIASES.get(name, name)
    if key not in FAMILIES:
        raise KeyError(f"unknown kernel family {name!r}; known: {sorted(FAMILIES)}")
    return FAMILIES[key]


@dataclass(frozen=True)
class KernelFamily:
    name: str
    params: tuple[float, ...] = ()

    def __post_init__(self):
        spec = resolve_family(self.name)
        object.__setattr__(self, "name", spec.name)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.params) != len(spec.params):
            raise DomainError(f"family {spec.name} takes parameters {spec.params}, got {self.params}")
        if spec.interval is not None:
            (nu,) = self.params
            lo, hi, text = spec.interval
            if not (lo - ENDPOINT_MARGIN <= nu <= hi + ENDPOINT_MARGIN):
                raise DomainError(f"{spec.name}: nu={nu!r} outside the validity interval {text}")
        if spec.region is not None and not spec.region(*self.params):
            raise DomainError(f"{spec.name}: parameters {self.params} outside the validity region {spec.region_text}")

    @property
    def spec(self) -> FamilySpec:
        return FAMILIES[self.name]

    @property
    def dim(self) -> int:
        return self.spec.dim


def family_spectrum(family: KernelFamily | str, *params: float) -> np.ndarray:
    """Closed-form spectrum of a named family, sorted descending.

    Interval endpoints are accepted (within a 1e-12 margin): at an endpoint the
    formula degenerates into the adjacent family's spectrum.
    """
    if not isinstance(family, KernelFamily):
        family = KernelFamily(family, params)
    vals = np.array(family.spec.formula(*family.params), dtype=float)
    return np.sort(vals)[::-1]


def family_kernel(family: KernelFamily | str, *params: float, u=None) -> SWKernel:
    spec = family_spectrum(family, *params)
    return build_kernel(ModuliPoint.from_spectrum(spec), u)


def qutrit_nu_from_angle(zeta):
    """Smallest qutrit eigenvalue ``nu = 1/3 - (4/3) cos zeta``; zeta is psi_1."""
    return 1.0 / 3 - 4.0 / 3 * np.cos(zeta)


def lucas_traces(max_n: int) -> dict[int, float]:
    """``{n: tr(Delta^n)}`` for the golden-ratio qutrit kernel, n = 2..max_n."""
    if max_n < 2:
        raise ValueError("max_n must be >= 2")
    d = np.diag(family_spectrum("qutrit-golden"))
    out = {}
    p = d.copy()
    for n in range(2, max_n + 1):
        p = p @ d
        out[n] = float(np.trace(p))
    return out


class SingularReport(NamedTuple):
    min_abs_eigenvalue: float
    zero_multiplicity: int
    label: str  # positions with a zero eigenvalue written as 0, e.g. "103"


def detect_singular(k: SWKernel | np.ndarray, tol: float = ZERO_TOL) -> SingularReport:
    spec = k.spectrum if isinstance(k, SWKernel) else eigvals_desc(k)
    zero = np.abs(spec) < tol
    label = "".join("0" if z else str(i + 1) for i, z in enumerate(zero))
    return SingularReport(float(np.min(np.abs(spec))), int(zero.sum()), label)
