"""Independent numerical verification by shooting.

The closed (second-order) radial equation F'' = Q(r) F is integrated with
the exact centrifugal term w/r^2, outward from the left end of the domain
and inward from r_max.  The normalized Wronskian of the two solutions at the
matching radius changes sign at every eigenvalue, which Brent's method then
refines.

For spin symmetry (difference potential A, sum potential V_GWS):
    Q = omega/r^2 + (m + E - A)(m - E)/hc^2 - (m + E - A) V0/hc^2 / (e^x + q)
For pseudospin symmetry (sum potential A', difference potential V_GWS):
    Q = omega~/r^2 + (m - E + A')(m + E)/hc^2 + (m - E + A') V0/hc^2 / (e^x + q)
with x = (r - R0)/a.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from . import _backend
from .errors import (
    DomainError,
    NoSignChange,
    ParameterError,
    StiffFailure,
    WsDiracError,
)
from .potential import PekerisCoefficients, PotentialParams, eval_gws, pole_radius
from .spectra import (
    EnergySolution,
    Kind,
    QuantumNumbers,
    SymmetryCase,
    pseudospin_energy_roots,
    spin_energy_roots,
)

log = logging.getLogger(__name__)

__all__ = [
    "ShootingProblem",
    "ShootingResult",
    "CrossCheck",
    "VerifyRow",
    "VerifyReport",
    "shoot_eigenvalue",
    "mismatch",
    "first_order_cross_check",
    "dirac_pair_residual",
    "verify_spectrum",
    "default_bracket",
]

START_OFFSET = 1e-6  # in units of a
TAIL_WIDTH = 25.0  # in units of a


@dataclass(frozen=True)
class ShootingProblem:
    """One eigenvalue search.

    Attributes
    ----------
    omega : int
        Exact centrifugal strength, kappa(kappa+1) for spin or
        kappa(kappa-1) for pseudospin.
    energy_bracket : (float, float)
        Search interval.
    r_min, r_max : float, optional
        Integration limits; defaults are 1e-6 a past the left end of the
        domain and 25 a past max(R0, pole).
    rtol : float
        Local relative tolerance of the integrator.
    r_match : float, optional
        Matching radius; default R0 when it lies at least ``a`` inside the
        domain, otherwise the outer classical turning point.
    kappa : int, optional
        Needed only to rebuild the second component in
        :func:`first_order_cross_check`.
    scan : int
        Number of subintervals sampled before refinement.
    """

    p: PotentialParams
    sym: SymmetryCase
    omega: int
    energy_bracket: tuple[float, float]
    r_min: float | None = None
    r_max: float | None = None
    rtol: float = 1e-12
    r_match: float | None = None
    kappa: int | None = None
    scan: int = 9
    max_steps: int = 2_000_000

    def __post_init__(self):
        p = self.p.with_radius()
        object.__setattr__(self, "p", p)
        if self.omega < 0:
            raise ParameterError("omega must be nonnegative")
        lo, hi = self.energy_bracket
        if not lo < hi:
            raise ParameterError("energy bracket must satisfy E_lo < E_hi")
        left = self.left_end
        if self.r_min is None:
            object.__setattr__(self, "r_min", left + START_OFFSET * p.a)
        if self.r_max is None:
            edge = max(p.R0, pole_radius(p) or 0.0)
            object.__setattr__(self, "r_max", edge + TAIL_WIDTH * p.a)
        if not self.r_min > max(left, 0.0) or (left == 0.0 and not self.r_min > 0):
            raise ParameterError("r_min must lie strictly inside the domain")
        if not self.r_max >= p.R0 + TAIL_WIDTH * p.a - 1e-12:
            raise ParameterError("r_max must be at least R0 + 25 a")
        if self.r_match is not None and not self.r_min < self.r_match < self.r_max:
            raise ParameterError("r_match must lie inside (r_min, r_max)")

    @property
    def left_end(self) -> float:
        rp = pole_radius(self.p)
        return 0.0 if rp is None else max(0.0, rp)

    @property
    def l_value(self) -> float:
        return 0.5 * (-1.0 + math.sqrt(1.0 + 4.0 * self.omega))

    def coefficients(self, E: float) -> tuple[float, float]:
        """(c0, c1) of Q = omega/r^2 + c0 + c1/(e^x + q) at energy ``E``."""
        hc2 = self.p.hbar_c ** 2
        m, A, V0 = self.sym.mass, self.sym.A, self.p.V0
        if self.sym.kind is Kind.SPIN:
            k = m + E - A
            return k * (m - E) / hc2, -k * V0 / hc2
        k = m - E + A
        return k * (m + E) / hc2, k * V0 / hc2

    def Q(self, r, E: float):
        c0, c1 = self.coefficients(E)
        p = self.p
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore"):
            return self.omega / r ** 2 + c0 + c1 / (np.exp((r - p.R0) / p.a) + p.q)


class ShootingResult(NamedTuple):
    E: float
    nodes: int
    mismatch: float
    r_match: float
    bracket: tuple[float, float]
    steps: int


class CrossCheck(NamedTuple):
    max_residual: float
    scale: float
    relative: float


class _Pair(NamedTuple):
    fo: float
    dfo: float
    fi: float
    dfi: float
    nodes: int
    steps: int


def _check(status: int, where: str):
    if status == 1:
        raise StiffFailure(f"step size underflow during {where} integration")
    if status == 2:
        raise StiffFailure(f"step budget exhausted during {where} integration")


def _outward_start(sp: ShootingProblem, E: float) -> tuple[float, float]:
    """(F, F') at r_min from the regular local series."""
    p, r = sp.p, sp.r_min
    c0, c1 = sp.coefficients(E)
    rp = pole_radius(p)
    if rp is not None and rp > 0:
        # near the pole Q ~ C/s, s = r - rp, regular solution s + (C/2) s^2
        s = r - rp
        C = c1 * p.a / (-p.q)
        return s + 0.5 * C * s * s, 1.0 + C * s
    l = sp.l_value
    q0 = c0 + c1 / (math.exp(-p.R0 / p.a) + p.q)
    # F = r^(l+1) (1 + q0 r^2 / (2 (2l+3))), scaled by r^-(l+1)
    g = q0 / (2.0 * (2.0 * l + 3.0))
    return 1.0 + g * r * r, (l + 1.0) / r * (1.0 + g * r * r) + 2.0 * g * r


def _inward_start(sp: ShootingProblem, E: float) -> tuple[float, float]:
    qv = float(sp.Q(sp.r_max, E))
    return 1.0, -math.sqrt(max(qv, 0.0))


def _match_radius(sp: ShootingProblem) -> float:
    if sp.r_match is not None:
        return sp.r_match
    p = sp.p
    if p.R0 >= sp.left_end + p.a and p.R0 > sp.r_min:
        return p.R0
    E = 0.5 * (sp.energy_bracket[0] + sp.energy_bracket[1])
    r = np.linspace(sp.r_min, sp.r_max, 20001)
    neg = np.nonzero(sp.Q(r, E) < 0)[0]
    if neg.size == 0:
        return min(sp.left_end + p.a, 0.5 * (sp.r_min + sp.r_max))
    return float(r[min(neg[-1] + 1, r.size - 1)])


def _integrate(sp, r0, r1, f0, df0, E, where):
    c0, c1 = sp.coefficients(E)
    p = sp.p
    f, df, ls, nodes, steps, status = _backend.integrate(
        r0, r1, f0, df0, float(sp.omega), c0, c1, p.R0, p.a, p.q,
        sp.rtol, p.a, sp.max_steps,
    )
    _check(status, where)
    return f, df, ls, nodes, steps


def _pair(sp: ShootingProblem, E: float, rm: float) -> _Pair:
    f0, df0 = _outward_start(sp, E)
    fo, dfo, _, no, so = _integrate(sp, sp.r_min, rm, f0, df0, E, "outward")
    f1, df1 = _inward_start(sp, E)
    fi, dfi, _, ni, si = _integrate(sp, sp.r_max, rm, f1, df1, E, "inward")
    return _Pair(fo, dfo, fi, dfi, no + ni, so + si)


def _wronskian(pr: _Pair, k: float) -> float:
    num = pr.dfo * pr.fi - pr.fo * pr.dfi
    den = math.sqrt((pr.dfo ** 2 + k * k * pr.fo ** 2) * (pr.dfi ** 2 + k * k * pr.fi ** 2))
    return num / den


def mismatch(sp: ShootingProblem, E: float, r_match: float | None = None) -> float:
    """Normalized Wronskian of outward and inward solutions, in [-1, 1]."""
    rm = _match_radius(sp) if r_match is None else r_match
    return _wronskian(_pair(sp, E, rm), 1.0 / sp.p.a)


def shoot_eigenvalue(sp: ShootingProblem) -> ShootingResult:
    """Locate the eigenvalue inside ``sp.energy_bracket``.

    The bracket is sampled on ``sp.scan`` subintervals; among the sign
    changes of the mismatch the one nearest the bracket centre is refined
    to |dE| <= 1e-9 mc^2.

    Raises
    ------
    NoSignChange
        If the mismatch keeps its sign across every subinterval.
    StiffFailure
        If the integrator cannot proceed.
    """
    rm = _match_radius(sp)
    k = 1.0 / sp.p.a
    lo, hi = sp.energy_bracket
    Es = np.linspace(lo, hi, sp.scan + 1)
    vals = [_wronskian(_pair(sp, float(E), rm), k) for E in Es]
    centre = 0.5 * (lo + hi)
    best = None
    for i in range(sp.scan):
        if vals[i] == 0.0 or vals[i] * vals[i + 1] < 0.0:
            mid = 0.5 * (Es[i] + Es[i + 1])
            if best is None or abs(mid - centre) < abs(0.5 * (Es[best] + Es[best + 1]) - centre):
                best = i
    if best is None:
        raise NoSignChange(f"no sign change of the mismatch on [{lo:.9g}, {hi:.9g}]")
    a_, b_ = float(Es[best]), float(Es[best + 1])
    if vals[best] == 0.0:
        E = a_
    else:
        E = brentq(
            lambda e: _wronskian(_pair(sp, e, rm), k), a_, b_,
            xtol=1e-9 * sp.sym.mass, rtol=1e-15, maxiter=200,
        )
    pr = _pair(sp, E, rm)
    return ShootingResult(float(E), pr.nodes, _wronskian(pr, k), rm, (a_, b_), pr.steps)


# -- first-order residual ---------------------------------------------------


def _d5(y: np.ndarray, h: float) -> np.ndarray:
    """Five-point central derivative on the interior of a uniform grid."""
    return (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / (12.0 * h)


def dirac_pair_residual(
    r: np.ndarray,
    F: np.ndarray,
    G: np.ndarray,
    E: float,
    p: PotentialParams,
    sym: SymmetryCase,
    kappa: int,
) -> CrossCheck:
    """Residual of the equation not used to build the second component.

    Spin: G came from (d/dr + kappa/r) F = (m + E - A) G, so check
    (d/dr - kappa/r) G = (m - E + V_GWS) F.
    Pseudospin: F came from (d/dr - kappa/r) G = (m - E + A') F, so check
    (d/dr + kappa/r) F = (m + E - V_GWS) G.
    ``r`` must be uniform; derivatives use five-point central differences.
    """
    r = np.asarray(r, dtype=float)
    h = r[1] - r[0]
    if not np.allclose(np.diff(r), h, rtol=1e-9, atol=0):
        raise DomainError("grid must be uniform")
    m = sym.mass
    V = eval_gws(p, r)
    ri = r[2:-2]
    if sym.kind is Kind.SPIN:
        lhs = _d5(G, h) - kappa * G[2:-2] / ri
        rhs = (m - E + V[2:-2]) * F[2:-2]
    else:
        lhs = _d5(F, h) + kappa * F[2:-2] / ri
        rhs = (m + E - V[2:-2]) * G[2:-2]
    res = float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0
    scale = float(np.max(np.abs(rhs))) if rhs.size else 0.0
    rel = res / scale if scale > 0 else (0.0 if res == 0 else math.inf)
    return CrossCheck(res, scale, rel)


def _shooting_profile(sp: ShootingProblem, E: float, r: np.ndarray, im: int):
    """F and F' on grid ``r``: outward up to index ``im``, inward after, joined in value."""
    n = r.size
    f = np.empty(n)
    df = np.empty(n)
    ls = np.empty(n)
    cur, dcur = _outward_start(sp, E)
    lcur = 0.0
    prev = sp.r_min
    for i in range(im + 1):
        a, b, l, _, _ = _integrate(sp, prev, r[i], cur, dcur, E, "outward")
        cur, dcur, lcur, prev = a, b, lcur + l, r[i]
        f[i], df[i], ls[i] = cur, dcur, lcur
    fi = np.empty(n)
    dfi = np.empty(n)
    lsi = np.empty(n)
    cur, dcur = _inward_start(sp, E)
    lcur = 0.0
    prev = sp.r_max
    for i in range(n - 1, im - 1, -1):
        a, b, l, _, _ = _integrate(sp, prev, r[i], cur, dcur, E, "inward")
        cur, dcur, lcur, prev = a, b, lcur + l, r[i]
        fi[i], dfi[i], lsi[i] = cur, dcur, lcur
    # scale inward branch to the outward value at the junction
    ref = ls[im]
    F = np.empty(n)
    dF = np.empty(n)
    F[: im + 1] = f[: im + 1] * np.exp(ls[: im + 1] - ref)
    dF[: im + 1] = df[: im + 1] * np.exp(ls[: im + 1] - ref)
    if fi[im] != 0.0 and f[im] != 0.0:
        ratio_sign = math.copysign(1.0, f[im] / fi[im])
        lfac = math.log(abs(f[im] / fi[im]))
    else:
        ratio_sign, lfac = 1.0, 0.0
    F[im + 1:] = ratio_sign * fi[im + 1:] * np.exp(lsi[im + 1:] - lsi[im] + lfac)
    dF[im + 1:] = ratio_sign * dfi[im + 1:] * np.exp(lsi[im + 1:] - lsi[im] + lfac)
    peak = np.max(np.abs(F))
    return F / peak, dF / peak


def first_order_cross_check(
    sp: ShootingProblem,
    E: float,
    kappa: int | None = None,
    state=None,
    points: int = 20001,
) -> CrossCheck:
    """Check the first-order Dirac pair at energy ``E``.

    Without ``state`` the closed component comes from the shooting
    solution (outward branch up to the matching node, inward branch after,
    joined in value only), so a derivative jump at non-eigenvalues shows up
    as a large residual.  With ``state`` the closed-form components of that
    state are checked on the same kind of grid.
    """
    kappa = sp.kappa if kappa is None else kappa
    if kappa is None:
        raise ParameterError("kappa is required to rebuild the second component")
    m, A = sp.sym.mass, sp.sym.A
    if state is not None:
        from .wavefunctions import (
            closed_component,
            closed_component_derivative,
            domain_start,
            quadrature_cutoff,
        )

        lo = domain_start(state) + START_OFFSET * sp.p.a
        lo = max(lo, sp.r_min)
        r = np.linspace(lo, min(sp.r_max, quadrature_cutoff(state)), points)
        phi = closed_component(state, r)
        dphi = closed_component_derivative(state, r)
    else:
        r = np.linspace(sp.r_min, sp.r_max, points)
        rm = _match_radius(sp)
        im = int(np.clip(np.searchsorted(r, rm), 2, points - 3))
        phi, dphi = _shooting_profile(sp, E, r, im)
    if sp.sym.kind is Kind.SPIN:
        F = phi
        G = (dphi + kappa * phi / r) / (m + E - A)
    else:
        G = phi
        F = (dphi - kappa * phi / r) / (m - E + A)
    return dirac_pair_residual(r, F, G, E, sp.p, sp.sym, kappa)


# -- campaign --------------------------------------------------------------


@dataclass(frozen=True)
class VerifyRow:
    n: int
    kappa: int
    root: int
    E_closed: float
    E_oracle: float | None
    abs_delta: float | None
    rel_delta: float | None
    nodes: int | None
    nodes_ok: bool | None
    presquare_consistent: bool
    bracket_rel: float | None
    error: str | None = None


@dataclass(frozen=True)
class VerifyReport:
    R0: float
    q: float
    kind: str
    rows: tuple[VerifyRow, ...] = field(default_factory=tuple)
    closed_form_error: str | None = None

    def to_dict(self) -> dict:
        return {
            "R0": self.R0,
            "q": self.q,
            "kind": self.kind,
            "closed_form_error": self.closed_form_error,
            "rows": [asdict(r) for r in self.rows],
        }


def default_bracket(E: float, mass: float, rel: float) -> tuple[float, float]:
    half = rel * max(abs(E), 1e-3 * mass)
    return E - half, E + half


def _widths(start: float, stop: float) -> list[float]:
    out = [start]
    while out[-1] < stop:
        out.append(min(stop, out[-1] * 2.0))
    return out


def _verify_root(p, sym, qn, omega, i, root, rel, max_rel, rtol, r_max) -> VerifyRow:
    last = None
    for w in _widths(rel, max_rel):
        sp = ShootingProblem(
            p, sym, omega, default_bracket(root.E, sym.mass, w),
            rtol=rtol, r_max=r_max, kappa=qn.kappa,
        )
        try:
            res = shoot_eigenvalue(sp)
        except NoSignChange as exc:
            last = exc
            continue
        except WsDiracError as exc:
            last = exc
            break
        d = abs(res.E - root.E)
        return VerifyRow(
            qn.n, qn.kappa, i, root.E, res.E, d, d / abs(root.E) if root.E else None,
            res.nodes, res.nodes == qn.n, root.presquare_consistent, w,
        )
    return VerifyRow(
        qn.n, qn.kappa, i, root.E, None, None, None, None, None,
        root.presquare_consistent, None, f"{type(last).__name__}: {last}",
    )


def verify_spectrum(
    p: PotentialParams,
    sym: SymmetryCase,
    qn: QuantumNumbers,
    d: PekerisCoefficients | None = None,
    rel: float = 0.05,
    max_rel: float = 0.25,
    rtol: float = 1e-12,
    r_max: float | None = None,
    workers: int = 1,
) -> VerifyReport:
    """Closed-form roots versus shooting eigenvalues for one (n, kappa).

    Every root with positive epsilon is checked.  The bracket starts at
    +-``rel`` around the closed-form value and doubles up to +-``max_rel``
    while no sign change is found.  Failures become row annotations.
    """
    p = p.with_radius()
    omega = qn.omega if sym.kind is Kind.SPIN else qn.omega_tilde
    try:
        solver = spin_energy_roots if sym.kind is Kind.SPIN else pseudospin_energy_roots
        sol: EnergySolution = solver(p, qn, sym, d)
    except WsDiracError as exc:
        return VerifyReport(p.R0, p.q, sym.kind.value, (), f"{type(exc).__name__}: {exc}")
    todo = [(i, r) for i, r in enumerate(sol.roots) if r.epsilon_positive]

    def run(item):
        i, root = item
        return _verify_root(p, sym, qn, omega, i, root, rel, max_rel, rtol, r_max)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(run, todo))
    else:
        rows = [run(t) for t in todo]
    return VerifyReport(p.R0, p.q, sym.kind.value, tuple(rows))


def verify_many(
    p: PotentialParams,
    sym: SymmetryCase,
    states: Sequence[QuantumNumbers],
    d: PekerisCoefficients | None = None,
    workers: int = 1,
    **kw,
) -> list[VerifyReport]:
    """Run :func:`verify_spectrum` for several states, results in input order."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(lambda qn: verify_spectrum(p, sym, qn, d, **kw), states))
    return [verify_spectrum(p, sym, qn, d, **kw) for qn in states]
