"""Energy spectra by exact quadratic reduction.

For spin symmetry the un-squared energy condition reads

    eps(E) = -(a/q)^2 [X(E)/S + (q/2a)^2 S],
    X(E)   = (q V0/hc^2)(m + E - A) + omega (q D1 - D2)/R0^2,

with eps^2(E) = (a/hc)^2 (m + E - A)(m - E) + omega a^2 D0/R0^2 and
S = 1 + 2n + xi.  Squaring gives a quadratic in E.  Both roots are kept
and flagged; ``presquare_consistent`` records whether the un-squared
right side is positive, i.e. whether the root is a genuine solution of the
unsquared condition with the decaying branch y^eps.

Pseudospin spectra follow from the spin ones by V0 -> -V0, A -> -A',
omega -> omega~ and E -> -E.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ComplexEpsilon,
    ImaginaryXi,
    NoBoundState,
    NoRealRoots,
    NoValidRoot,
    ParameterError,
    WsDiracError,
)
from .nu import NuTemplate, derive_nu_constants, key_polynomials, nu_energy_residual
from .potential import PekerisCoefficients, PotentialParams, pekeris_taylor

__all__ = [
    "Kind",
    "QuantumNumbers",
    "SymmetryCase",
    "RootInfo",
    "EnergySolution",
    "NonRelLevel",
    "TableRow",
    "spin_energy_roots",
    "pseudospin_energy_roots",
    "pseudospin_direct_roots",
    "swave_energy_roots",
    "kg_energy_roots",
    "free_limit_energy",
    "nonrel_energy",
    "nonrel_swave_energy",
    "epsilon_spin",
    "xi_value",
    "spin_equation_residual",
    "swave_equation_residual",
    "ws_template",
    "nu_check",
    "scan_energy_roots",
    "spectrum_table",
]


class Kind(str, Enum):
    SPIN = "spin"
    PSEUDOSPIN = "pseudospin"


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial quantum number ``n`` and spin-orbit number ``kappa``."""

    n: int
    kappa: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ParameterError(f"n must be a nonnegative integer, got {self.n!r}")
        if int(self.kappa) != self.kappa or self.kappa == 0:
            raise ParameterError(f"kappa must be a nonzero integer, got {self.kappa!r}")

    @property
    def omega(self) -> int:
        return self.kappa * (self.kappa + 1)

    @property
    def omega_tilde(self) -> int:
        return self.kappa * (self.kappa - 1)

    @property
    def l(self) -> int:
        return self.kappa if self.kappa > 0 else -self.kappa - 1

    @property
    def l_tilde(self) -> int:
        return self.kappa - 1 if self.kappa > 0 else -self.kappa


@dataclass(frozen=True)
class SymmetryCase:
    """Symmetry limit with its constant potential and the rest energy."""

    kind: Kind
    A: float
    mass: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not (math.isfinite(self.A) and math.isfinite(self.mass)):
            raise ParameterError("A and mass must be finite")
        if not self.mass > 0:
            raise ParameterError("mass must be positive")


class RootInfo(NamedTuple):
    E: float
    epsilon: float
    epsilon_positive: bool
    presquare_consistent: bool
    bound_window: bool


@dataclass(frozen=True)
class EnergySolution:
    """Both roots of an energy equation.

    ``roots[0]`` is the root farther from the accumulation point A - mc^2
    (A' + mc^2 for pseudospin) and ``roots[1]`` the other one.
    """

    roots: tuple[RootInfo, ...]
    physical: int | None
    S: float
    xi: float
    n: int = 0
    omega: float = 0.0
    kind: Kind = Kind.SPIN

    @property
    def energies(self) -> tuple[float, ...]:
        return tuple(r.E for r in self.roots)

    @property
    def physical_root(self) -> RootInfo | None:
        return None if self.physical is None else self.roots[self.physical]


class NonRelLevel(NamedTuple):
    E: float
    bound: bool


@dataclass(frozen=True)
class TableRow:
    n: int
    kappa: int
    solution: EnergySolution | None = None
    error: str | None = None
    omega: int = field(default=0)


# -- helpers ---------------------------------------------------------------


def _solve_quadratic(c2: float, c1: float, c0: float) -> tuple[float, float]:
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0.0:
        raise NoRealRoots(f"discriminant {disc:.6g} < 0")
    s = math.sqrt(disc)
    qq = -0.5 * (c1 + math.copysign(s, c1))
    if qq == 0.0:
        return 0.0, 0.0
    return qq / c2, c0 / qq


def xi_value(p: PotentialParams, omega: float, d: PekerisCoefficients | None) -> float:
    """xi = sqrt(1 + 4 omega a^2 D2 / (q^2 R0^2)); 1 when omega = 0."""
    if omega == 0:
        return 1.0
    arg = 1.0 + 4.0 * omega * p.a ** 2 * d.D2 / (p.q ** 2 * p.radius ** 2)
    if arg < 0.0:
        raise ImaginaryXi(f"xi^2 = {arg:.6g} < 0")
    return math.sqrt(arg)


def _prepare(p: PotentialParams, omega: float, d: PekerisCoefficients | None):
    if omega == 0:
        return p, None
    p = p.with_radius()
    if d is None:
        d = pekeris_taylor(p)
    return p, d


class _Linear(NamedTuple):
    """Coefficients of eps^2(E) (quadratic) and eps_pre(E) (linear)."""

    e2: float
    e1: float
    e0: float
    u1: float
    u0: float


def _spin_coeffs(p, omega, A, m, S, d) -> _Linear:
    hc2 = p.hbar_c ** 2
    a2 = p.a ** 2
    q = p.q
    k = a2 / hc2
    # eps^2 = k (m + E - A)(m - E) + omega a^2 D0 / R0^2
    cent0 = omega * a2 * d.D0 / p.radius ** 2 if omega else 0.0
    e2 = -k
    e1 = k * A
    e0 = k * (m * m - A * m) + cent0
    # eps_pre = -(a^2/q) W'/S - omega a^2 (q D1 - D2)/(q^2 R0^2 S) - S/4
    w1 = p.V0 / hc2
    w0 = p.V0 * (m - A) / hc2
    cent1 = omega * a2 * (q * d.D1 - d.D2) / (q * q * p.radius ** 2 * S) if omega else 0.0
    u1 = -(a2 / q) * w1 / S
    u0 = -(a2 / q) * w0 / S - cent1 - S / 4.0
    return _Linear(e2, e1, e0, u1, u0)


def _roots_from(c: _Linear) -> tuple[float, float]:
    return _solve_quadratic(
        c.e2 - c.u1 * c.u1,
        c.e1 - 2.0 * c.u0 * c.u1,
        c.e0 - c.u0 * c.u0,
    )


def _root_info(c: _Linear, E: float, window: bool) -> RootInfo:
    eps2 = (c.e2 * E + c.e1) * E + c.e0
    pre = c.u1 * E + c.u0
    eps = math.sqrt(eps2) if eps2 >= 0.0 else float("nan")
    return RootInfo(E, eps, eps2 > 0.0, pre > 0.0, window)


def _select(roots: Sequence[RootInfo]) -> int:
    cands = [i for i, r in enumerate(roots) if r.epsilon_positive]
    if not cands:
        raise NoValidRoot("no root yields a positive epsilon")
    full = [i for i in cands if roots[i].presquare_consistent and roots[i].bound_window]
    if len(full) == 1:
        return full[0]
    pool = full or cands
    return pool[0]  # roots are ordered with E1 first


def _order(E_a: float, E_b: float, anchor: float) -> tuple[float, float]:
    if abs(E_b - anchor) > abs(E_a - anchor):
        return E_b, E_a
    return E_a, E_b


def _spin_solution(p, n, omega, A, m, d, window, kind=Kind.SPIN) -> EnergySolution:
    xi = xi_value(p, omega, d)
    S = 1.0 + 2.0 * n + xi
    c = _spin_coeffs(p, omega, A, m, S, d)
    E1, E2 = _order(*_roots_from(c), anchor=A - m)
    roots = tuple(_root_info(c, E, window(E)) for E in (E1, E2))
    return EnergySolution(roots, _select(roots), S, xi, n, omega, kind)


def _negated(sol: EnergySolution, window) -> EnergySolution:
    roots = tuple(
        RootInfo(-r.E, r.epsilon, r.epsilon_positive, r.presquare_consistent, window(-r.E))
        for r in sol.roots
    )
    return EnergySolution(roots, sol.physical, sol.S, sol.xi, sol.n, sol.omega, Kind.PSEUDOSPIN)


# -- public API ------------------------------------------------------------


def spin_energy_roots(
    p: PotentialParams,
    qn: QuantumNumbers,
    sym: SymmetryCase,
    d: PekerisCoefficients | None = None,
) -> EnergySolution:
    """Both energy roots in the spin-symmetric limit.

    Parameters
    ----------
    p : PotentialParams
        Potential; R0 is needed only when omega != 0.
    qn : QuantumNumbers
        Radial and spin-orbit quantum numbers.
    sym : SymmetryCase
        Must have ``kind == "spin"``; ``sym.A`` is the constant difference
        potential.
    d : PekerisCoefficients, optional
        Centrifugal coefficients; Taylor-matched ones are computed when
        omitted and omega != 0.
    """
    if sym.kind is not Kind.SPIN:
        raise ParameterError("spin_energy_roots needs a spin symmetry case")
    omega = qn.omega
    p, d = _prepare(p, omega, d)
    m, A = sym.mass, sym.A
    return _spin_solution(p, qn.n, omega, A, m, d, lambda E: (A < m + E) and (E < m))


def pseudospin_energy_roots(
    p: PotentialParams,
    qn: QuantumNumbers,
    sym: SymmetryCase,
    d: PekerisCoefficients | None = None,
) -> EnergySolution:
    """Pseudospin roots through the spin solver under the parameter mapping."""
    if sym.kind is not Kind.PSEUDOSPIN:
        raise ParameterError("pseudospin_energy_roots needs a pseudospin symmetry case")
    omega = qn.omega_tilde
    p, d = _prepare(p, omega, d)
    m, Ap = sym.mass, sym.A
    mapped = PotentialParams(-p.V0, p.q, p.a, p.R0, p.hbar_c)
    sol = _spin_solution(mapped, qn.n, omega, -Ap, m, d, lambda E: True)
    return _negated(sol, lambda E: (-m < E) and (E < m + Ap))


def pseudospin_direct_roots(
    p: PotentialParams,
    qn: QuantumNumbers,
    sym: SymmetryCase,
    d: PekerisCoefficients | None = None,
) -> tuple[float, float]:
    """Roots of the pseudospin condition coded directly, without the mapping.

    eps~^2 = (a/hc)^2 (m + E)(m - E + A') + omega~ a^2 D0/R0^2 and
    eps~_pre = -(a/q)^2 [X~/S + (q/2a)^2 S],
    X~ = -(q V0/hc^2)(m - E + A') + omega~ (q D1 - D2)/R0^2.
    Returned in the same E1, E2 order as :func:`pseudospin_energy_roots`.
    """
    omega = qn.omega_tilde
    p, d = _prepare(p, omega, d)
    m, Ap = sym.mass, sym.A
    hc2, a2, q = p.hbar_c ** 2, p.a ** 2, p.q
    xi = xi_value(p, omega, d)
    S = 1.0 + 2.0 * qn.n + xi
    k = a2 / hc2
    cent0 = omega * a2 * d.D0 / p.radius ** 2 if omega else 0.0
    # (m + E)(m - E + A') = -E^2 + A' E + m^2 + A' m
    e2, e1, e0 = -k, k * Ap, k * (m * m + Ap * m) + cent0
    cent1 = omega * (q * d.D1 - d.D2) / p.radius ** 2 if omega else 0.0
    # X~ = -(q V0/hc^2)(m + A') + (q V0/hc^2) E + cent1
    x1 = q * p.V0 / hc2
    x0 = -q * p.V0 * (m + Ap) / hc2 + cent1
    f = -(a2 / (q * q))
    u1 = f * x1 / S
    u0 = f * (x0 / S + q * q * S / (4.0 * a2))
    c = _Linear(e2, e1, e0, u1, u0)
    return _order(*_roots_from(c), anchor=Ap + m)


def swave_energy_roots(p: PotentialParams, n: int, A: float, mass: float) -> EnergySolution:
    """Exact s-wave (kappa = -1) spin-symmetric roots.

    Solves m^2 - E^2 - A(m - E) = (hc^2/4) [a V0 (m + E - A)/(q hc^2 (n+1)) + (n+1)/a]^2
    with its own coefficient assembly; no centrifugal coefficients enter.
    """
    QuantumNumbers(n, -1)
    hc, a, q, m = p.hbar_c, p.a, p.q, mass
    hc2 = hc * hc
    # bracket B(E) = b1 E + b0
    b1 = a * p.V0 / (q * hc2 * (n + 1))
    b0 = a * p.V0 * (m - A) / (q * hc2 * (n + 1)) + (n + 1) / a
    # -E^2 + A E + m^2 - A m - (hc^2/4)(b1 E + b0)^2 = 0
    h = hc2 / 4.0
    r_a, r_b = _solve_quadratic(
        -1.0 - h * b1 * b1,
        A - 2.0 * h * b1 * b0,
        m * m - A * m - h * b0 * b0,
    )
    E1, E2 = _order(r_a, r_b, anchor=A - m)
    roots = []
    for E in (E1, E2):
        lhs = m * m - E * E - A * (m - E)
        eps = a / hc * math.sqrt(lhs) if lhs >= 0.0 else float("nan")
        pre = -(a / 2.0) * (b1 * E + b0)
        roots.append(RootInfo(E, eps, lhs > 0.0, pre > 0.0, (A < m + E) and (E < m)))
    roots = tuple(roots)
    return EnergySolution(roots, _select(roots), 2.0 * (n + 1), 1.0, n, 0, Kind.SPIN)


def kg_energy_roots(
    p: PotentialParams,
    qn: QuantumNumbers,
    d: PekerisCoefficients | None = None,
    mass: float = 1.0,
) -> EnergySolution:
    """Klein-Gordon limit (A = 0) with the bound-state window E^2 <= m^2 + omega hc^2 D0/R0^2."""
    omega = qn.omega
    p, d = _prepare(p, omega, d)
    m = mass
    edge = m * m + (omega * p.hbar_c ** 2 * d.D0 / p.radius ** 2 if omega else 0.0)
    return _spin_solution(p, qn.n, omega, 0.0, m, d, lambda E: E * E <= edge)


def free_limit_energy(n: int, m: float, a: float, hbar_c: float = 1.0) -> tuple[float, float]:
    """Particle and antiparticle energies +-(1/2a) sqrt(4 a^2 m^2 - hc^2 (n+1)^2).

    Raises
    ------
    NoBoundState
        When the radicand is negative.
    """
    QuantumNumbers(n, -1)
    u = 2.0 * a * m
    v = hbar_c * (n + 1)
    rad = (u - v) * (u + v)
    if rad < 0.0:
        raise NoBoundState(f"n = {n}: radicand {rad:.6g} < 0")
    E = math.sqrt(rad) / (2.0 * a)
    return E, -E


def nonrel_energy(
    p: PotentialParams,
    n: int,
    l: int,
    mu: float,
    d: PekerisCoefficients | None = None,
    hbar: float = 1.0,
) -> NonRelLevel:
    """Non-relativistic level for arbitrary l with the bound flag."""
    if int(l) != l or l < 0:
        raise ParameterError("l must be a nonnegative integer")
    QuantumNumbers(n, -1)
    w = l * (l + 1)
    p, d = _prepare(p, w, d)
    q, a = p.q, p.a
    xi = xi_value(p, w, d)
    S = 1.0 + 2.0 * n + xi
    k = 2.0 * mu / hbar ** 2
    cent1 = w * (q * d.D1 - d.D2) / (q * q * p.radius ** 2) if w else 0.0
    cent0 = hbar ** 2 * w * d.D0 / (2.0 * mu * p.radius ** 2) if w else 0.0
    br = (k * p.V0 / q + cent1) / S + S / (4.0 * a * a)
    E = cent0 - hbar ** 2 * a * a / (2.0 * mu) * br * br
    return NonRelLevel(E, E < cent0)


def nonrel_swave_energy(V0: float, q: float, a: float, n: int, mu: float, hbar: float = 1.0) -> float:
    """Closed s-wave non-relativistic level -(hbar^2 a^2/8mu)[(2mu/hbar^2)V0/(q(n+1)) + (n+1)/a^2]^2."""
    br = 2.0 * mu / hbar ** 2 * V0 / (q * (n + 1)) + (n + 1) / a ** 2
    return -(hbar ** 2) * a * a / (8.0 * mu) * br * br


def epsilon_spin(
    p: PotentialParams,
    qn: QuantumNumbers,
    sym: SymmetryCase,
    E: float,
    d: PekerisCoefficients | None = None,
) -> float:
    """epsilon (spin) or epsilon~ (pseudospin) at energy ``E``.

    Raises
    ------
    ComplexEpsilon
        If the radicand is negative.
    """
    m, A = sym.mass, sym.A
    if sym.kind is Kind.SPIN:
        omega, kin = qn.omega, (m + E - A) * (m - E)
    else:
        omega, kin = qn.omega_tilde, (m + E) * (m - E + A)
    p, d = _prepare(p, omega, d)
    rad = (p.a / p.hbar_c) ** 2 * kin
    if omega:
        rad += omega * p.a ** 2 * d.D0 / p.radius ** 2
    if rad < 0.0:
        raise ComplexEpsilon(f"epsilon^2 = {rad:.6g} < 0")
    return math.sqrt(rad)


def spin_equation_residual(
    p: PotentialParams,
    qn: QuantumNumbers,
    sym: SymmetryCase,
    E: float,
    d: PekerisCoefficients | None = None,
) -> tuple[float, float]:
    """``(LHS - RHS, LHS)`` of the squared spin condition in its printed arrangement.

    LHS = m^2 - E^2 - A(m - E);
    RHS = -hc^2 omega D0/R0^2
          + (a hc/q)^2 [(V0/hc^2)(m+E-A)/S + omega(q D1 - D2)/(q R0^2 S) + q S/(4a^2)]^2.
    """
    omega = qn.omega
    p, d = _prepare(p, omega, d)
    m, A, hc, a, q = sym.mass, sym.A, p.hbar_c, p.a, p.q
    xi = xi_value(p, omega, d)
    S = 1.0 + 2.0 * qn.n + xi
    lhs = m * m - E * E - A * (m - E)
    br = p.V0 / hc ** 2 * (m + E - A) / S + q * S / (4.0 * a * a)
    rhs = 0.0
    if omega:
        br += omega * (q * d.D1 - d.D2) / (q * p.radius ** 2 * S)
        rhs -= hc ** 2 * omega * d.D0 / p.radius ** 2
    rhs += (a * hc / q) ** 2 * br * br
    return lhs - rhs, lhs


def swave_equation_residual(p: PotentialParams, n: int, A: float, mass: float, E: float):
    """``(LHS - RHS, LHS)`` of the s-wave condition as written."""
    hc, a, q, m = p.hbar_c, p.a, p.q, mass
    lhs = m * m - E * E - A * (m - E)
    br = a * p.V0 * (m + E - A) / (q * hc * hc * (n + 1)) + (n + 1) / a
    return lhs - hc * hc / 4.0 * br * br, lhs


def ws_template(
    p: PotentialParams,
    qn: QuantumNumbers,
    sym: SymmetryCase,
    E: float,
    d: PekerisCoefficients | None = None,
    orientation: str | None = None,
) -> NuTemplate:
    """NU template of the radial equation at energy ``E``.

    ``orientation="z"`` uses the variable z = -y with c3 = q;
    ``orientation="y"`` uses y itself with c3 = -q.  The default picks the
    orientation with c3 > 0, in which the principal square roots select the
    decaying branch.  Pseudospin cases are mapped to spin first.
    """
    if sym.kind is Kind.SPIN:
        omega, V0, A, En = qn.omega, p.V0, sym.A, E
    else:
        omega, V0, A, En = qn.omega_tilde, -p.V0, -sym.A, -E
    p, d = _prepare(p, omega, d)
    m, a2, q = sym.mass, p.a ** 2, p.q
    hc2 = p.hbar_c ** 2
    Wp = V0 * (m + En - A) / hc2
    eps2 = a2 / hc2 * (m + En - A) * (m - En)
    c_b1 = c_b2 = 0.0
    if omega:
        R2 = p.radius ** 2
        eps2 += omega * a2 * d.D0 / R2
        c_b1 = omega * a2 * (q * d.D1 - d.D2) / R2
        c_b2 = omega * a2 * d.D1 / R2
    beta1 = q * q * eps2 - q * a2 * Wp - c_b1
    beta2 = 2.0 * q * eps2 - a2 * Wp - c_b2
    if orientation is None:
        orientation = "z" if q > 0 else "y"
    if orientation == "z":
        return NuTemplate(1.0, q, q, beta1, beta2, eps2)
    if orientation == "y":
        return NuTemplate(1.0, -q, -q, beta1, -beta2, eps2)
    raise ParameterError("orientation must be 'z' or 'y'")


class NuCheck(NamedTuple):
    residual: float
    tau_slope: float
    admissible: bool


def nu_check(p, qn, sym, E, d=None, orientation=None) -> NuCheck:
    """Energy-condition residual and tau' of the NU template at ``E``."""
    t = ws_template(p, qn, sym, E, d, orientation)
    k = derive_nu_constants(t)
    kp = key_polynomials(t, k)
    return NuCheck(nu_energy_residual(t, k, qn.n), kp.tau_slope, kp.admissible)


def scan_energy_roots(f, lo: float, hi: float, samples: int = 4001) -> list[float]:
    """All sign changes of ``f`` on a uniform grid over [lo, hi], refined by Brent."""
    E = np.linspace(lo, hi, samples)
    v = np.array([f(e) for e in E])
    out = []
    for i in range(samples - 1):
        if v[i] == 0.0:
            out.append(float(E[i]))
        elif v[i] * v[i + 1] < 0.0:
            out.append(brentq(f, E[i], E[i + 1], xtol=1e-14, rtol=1e-15))
    return out


def _cell(p, sym, n, kappa, d) -> TableRow:
    qn = QuantumNumbers(n, kappa)
    omega = qn.omega if sym.kind is Kind.SPIN else qn.omega_tilde
    try:
        if sym.kind is Kind.SPIN:
            sol = spin_energy_roots(p, qn, sym, d)
        else:
            sol = pseudospin_energy_roots(p, qn, sym, d)
        return TableRow(n, kappa, sol, None, omega)
    except WsDiracError as exc:
        return TableRow(n, kappa, None, f"{type(exc).__name__}: {exc}", omega)


def spectrum_table(
    p: PotentialParams,
    sym: SymmetryCase,
    n_max: int,
    kappa_list: Sequence[int],
    d: PekerisCoefficients | None = None,
    workers: int = 1,
) -> list[TableRow]:
    """Dense (n, kappa) table ordered by n, then kappa, both ascending.

    Per-cell failures are recorded on the row instead of aborting.
    """
    if int(n_max) != n_max or n_max < 0:
        raise ParameterError("n_max must be a nonnegative integer")
    kappas = sorted(kappa_list)
    if not kappas:
        raise ParameterError("kappa_list must not be empty")
    if any(int(k) != k or k == 0 for k in kappas):
        raise ParameterError("kappa_list entries must be nonzero integers")
    if any(k * (k + 1) if sym.kind is Kind.SPIN else k * (k - 1) for k in kappas):
        p = p.with_radius()
        if d is None:
            try:
                d = pekeris_taylor(p)
            except WsDiracError:
                d = None
    cells = [(n, k) for n in range(int(n_max) + 1) for k in kappas]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(lambda c: _cell(p, sym, c[0], c[1], d), cells))
    return [_cell(p, sym, n, k, d) for n, k in cells]
