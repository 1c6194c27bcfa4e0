"""Closed-form spinor components and their normalization.

The closed-form radial component is

    Phi(r) = N y^eps (1 + q y)^((1 + xi)/2) P_n^(2 eps, xi)(1 + 2 q y),
    y = exp(-(r - R0)/a),

which is the upper component F for spin symmetry and the lower component G
for pseudospin symmetry (with eps~, xi~ and the mapped parameters).  The
other component follows from the first-order Dirac pair.  Evaluation runs
in log space so that large eps (~20) and large y near the origin stay
finite.
"""

from __future__ import annotations

import math
import warnings
from decimal import Decimal, localcontext
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .errors import (
    DomainError,
    NonConvergence,
    ParameterError,
    SeriesDivergence,
    SpinSingularity,
    UnsupportedN,
)
from .potential import PekerisCoefficients, PotentialParams, pole_radius
from .special import hyp2f1_terminating, jacobi, log_pochhammer
from .spectra import (
    Kind,
    QuantumNumbers,
    SymmetryCase,
    _prepare,
    epsilon_spin,
    pseudospin_energy_roots,
    spin_energy_roots,
    xi_value,
)

__all__ = [
    "SpinorState",
    "make_state",
    "closed_component",
    "closed_component_derivative",
    "upper_spinor_F",
    "lower_spinor_G",
    "lower_spinor_G_from_F",
    "lower_spinor_G_pseudospin",
    "normalize_quadrature",
    "normalize_series",
    "normalization_integral_series",
    "domain_start",
    "quadrature_cutoff",
    "count_nodes",
]


@dataclass(frozen=True)
class SpinorState:
    """Closed-form descriptor of one spinor state.

    ``log_norm`` stores log N; :attr:`norm_constant` exponentiates it.
    A freshly built state has ``log_norm = 0`` (N = 1).
    """

    p: PotentialParams
    qn: QuantumNumbers
    sym: SymmetryCase
    E: float
    epsilon: float
    xi: float
    log_norm: float = 0.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon!r}")
        if not self.xi > -1:
            raise ParameterError(f"xi must exceed -1, got {self.xi!r}")
        if self.p.R0 is None:
            raise ParameterError("state needs an explicit R0")

    @property
    def norm_constant(self) -> float:
        return math.exp(self.log_norm)

    @property
    def kind(self) -> Kind:
        return self.sym.kind

    @property
    def nu(self) -> float:
        return 0.5 * (1.0 + self.xi)

    def with_norm(self, N: float) -> "SpinorState":
        return replace(self, log_norm=math.log(N))

    def with_log_norm(self, log_norm: float) -> "SpinorState":
        return replace(self, log_norm=log_norm)


def make_state(
    p: PotentialParams,
    qn: QuantumNumbers,
    sym: SymmetryCase,
    E: float | None = None,
    d: PekerisCoefficients | None = None,
    root: int | None = None,
    normalize: str | None = "quadrature",
) -> SpinorState:
    """Build a state from a spectrum root.

    Parameters
    ----------
    E : float, optional
        Energy; when omitted the spectrum is solved and ``root`` (or the
        physical root) is taken.
    normalize : {"quadrature", "series", None}
        Normalization applied to the closed-form component.
    """
    p = p.with_radius()
    omega = qn.omega if sym.kind is Kind.SPIN else qn.omega_tilde
    p, d = _prepare(p, omega, d)
    if E is None:
        solver = spin_energy_roots if sym.kind is Kind.SPIN else pseudospin_energy_roots
        sol = solver(p, qn, sym, d)
        idx = sol.physical if root is None else root
        E = sol.roots[idx].E
    eps = epsilon_spin(p, qn, sym, E, d)
    xi = xi_value(p, omega, d)
    s = SpinorState(p, qn, sym, float(E), eps, xi)
    if normalize == "quadrature":
        return s.with_norm(normalize_quadrature(s))
    if normalize == "series":
        return s.with_norm(normalize_series(s))
    if normalize is not None:
        raise ParameterError(f"unknown normalization {normalize!r}")
    return s


# -- evaluation ------------------------------------------------------------


def domain_start(s: SpinorState) -> float:
    """Left end of the physical domain: 0, or the pole radius for q < 0."""
    rp = pole_radius(s.p)
    return 0.0 if rp is None else max(0.0, rp)


def _log_parts(s: SpinorState, r):
    """Return (t, qy, log(1 + q y)) with t = log y."""
    p = s.p
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("r must be nonnegative")
    t = -(r - p.R0) / p.a
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if p.q > 0:
            qy = p.q * np.exp(t)
            l1 = np.logaddexp(0.0, math.log(p.q) + t)
        else:
            qy = p.q * np.exp(t)
            if np.any(qy <= -1.0):
                raise DomainError("1 + q y <= 0: point at or beyond the pole")
            l1 = np.log1p(qy)
    return t, qy, l1


def _jacobi_at(s: SpinorState, qy):
    return jacobi(s.qn.n, 2.0 * s.epsilon, s.xi, 1.0 + 2.0 * qy)


def _hyp_at(s: SpinorState, qy):
    n, eps, xi = s.qn.n, s.epsilon, s.xi
    lc, sc = log_pochhammer(2.0 * eps + 1.0, n)
    lc -= math.lgamma(n + 1.0)
    h = hyp2f1_terminating(n, n + 2.0 * eps + xi + 1.0, 2.0 * eps + 1.0, -np.asarray(qy))
    return sc * math.exp(lc) * h


def _assemble(log_base, poly):
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        mag = np.abs(poly)
        out = np.sign(poly) * np.exp(log_base + np.log(mag))
    return np.where(mag == 0.0, 0.0, out)


def closed_component(s: SpinorState, r, method: str = "jacobi"):
    """Phi(r): F for spin states, G for pseudospin states.

    ``method="hyp2f1"`` evaluates the polynomial through the terminating
    hypergeometric sum instead of the Jacobi recurrence.
    """
    t, qy, l1 = _log_parts(s, r)
    if method == "jacobi":
        poly = _jacobi_at(s, qy)
    elif method == "hyp2f1":
        poly = _hyp_at(s, qy)
    else:
        raise ParameterError(f"unknown method {method!r}")
    out = _assemble(s.log_norm + s.epsilon * t + s.nu * l1, poly)
    return float(out) if np.ndim(r) == 0 else out


def closed_component_derivative(s: SpinorState, r):
    """Analytic dPhi/dr.

    The polynomial is (2eps+1)_n/n! 2F1(-n, b; c; -q y), b = n + 2eps + xi + 1,
    c = 2eps + 1, and its derivative uses
    d/ds 2F1(-n, b; c; s) = (-n b / c) 2F1(1 - n, b + 1; c + 1; s).
    """
    n, eps, xi, a = s.qn.n, s.epsilon, s.xi, s.p.a
    t, qy, l1 = _log_parts(s, r)
    log_base = s.log_norm + eps * t + s.nu * l1
    P = _jacobi_at(s, qy)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(np.isinf(qy), 1.0, qy / (1.0 + qy))
    term = -(eps + s.nu * ratio) / a * P
    if n > 0:
        b, c = n + 2.0 * eps + xi + 1.0, 2.0 * eps + 1.0
        lc, sc = log_pochhammer(c, n)
        lc -= math.lgamma(n + 1.0)
        h1 = hyp2f1_terminating(n - 1, b + 1.0, c + 1.0, -np.asarray(qy))
        dP_ds = sc * math.exp(lc) * (-n * b / c) * h1
        term = term + dP_ds * qy / a
    out = _assemble(log_base, 1.0) * term
    return float(out) if np.ndim(r) == 0 else out


def _radius_array(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r must be positive where kappa/r enters")
    return r


def lower_spinor_G_from_F(s: SpinorState, r):
    """G = (dF/dr + kappa F / r)/(mc^2 + E - A) for a spin state."""
    if s.kind is not Kind.SPIN:
        raise ParameterError("lower_spinor_G_from_F needs a spin state")
    den = s.sym.mass + s.E - s.sym.A
    if abs(den) < 1e-12 * s.sym.mass:
        raise SpinSingularity("mc^2 + E - A vanishes")
    rr = _radius_array(r)
    F = closed_component(s, rr)
    dF = closed_component_derivative(s, rr)
    out = (dF + s.qn.kappa * F / rr) / den
    return float(out) if np.ndim(r) == 0 else out


def lower_spinor_G_pseudospin(s: SpinorState, r):
    """Closed-form lower component of a pseudospin state."""
    if s.kind is not Kind.PSEUDOSPIN:
        raise ParameterError("lower_spinor_G_pseudospin needs a pseudospin state")
    return closed_component(s, r)


def upper_spinor_F(s: SpinorState, r):
    """Upper component F(r).

    Closed form for spin states; for pseudospin states
    F = (dG/dr - kappa G / r)/(mc^2 - E + A').
    """
    if s.kind is Kind.SPIN:
        return closed_component(s, r)
    den = s.sym.mass - s.E + s.sym.A
    if abs(den) < 1e-12 * s.sym.mass:
        raise SpinSingularity("mc^2 - E + A' vanishes")
    rr = _radius_array(r)
    G = closed_component(s, rr)
    dG = closed_component_derivative(s, rr)
    out = (dG - s.qn.kappa * G / rr) / den
    return float(out) if np.ndim(r) == 0 else out


def lower_spinor_G(s: SpinorState, r):
    """Lower component G(r) for either symmetry."""
    if s.kind is Kind.SPIN:
        return lower_spinor_G_from_F(s, r)
    return lower_spinor_G_pseudospin(s, r)


def count_nodes(values) -> int:
    """Sign changes in a sampled function, ignoring exact zeros."""
    v = np.asarray(values, dtype=float)
    sg = np.sign(v[v != 0.0])
    return int(np.count_nonzero(sg[1:] != sg[:-1]))


# -- normalization ---------------------------------------------------------


def quadrature_cutoff(s: SpinorState) -> float:
    """Upper integration limit R0 + (40/eps) a max(1, eps)."""
    return s.p.R0 + 40.0 / s.epsilon * s.p.a * max(1.0, s.epsilon)


def _log_abs(s: SpinorState, r):
    t, qy, l1 = _log_parts(s, r)
    P = _jacobi_at(s, qy)
    with np.errstate(divide="ignore"):
        return s.epsilon * t + s.nu * l1 + np.log(np.abs(P))


def normalize_quadrature(s: SpinorState, tol: float = 1e-10) -> float:
    """N with int Phi^2 dr = 1 over the physical domain, by adaptive quadrature.

    The domain starts at 0 (or at the pole for q < 0) and ends at
    :func:`quadrature_cutoff`.  The integrand is rescaled by its peak so the
    absolute tolerance applies to an O(1) function.

    Raises
    ------
    NonConvergence
        When the adaptive scheme reports failure or an error above ``tol``.
    """
    base = s.with_log_norm(0.0)
    lo, hi = domain_start(s), quadrature_cutoff(s)
    grid = np.linspace(lo, hi, 4001)[1:-1]
    logs = _log_abs(base, grid)
    peak = float(np.max(logs[np.isfinite(logs)]))
    # split near the peak and at every node so panels see smooth pieces
    centre = float(grid[int(np.nanargmax(logs))])
    P = _jacobi_at(base, _log_parts(base, grid)[1])
    brk = grid[1:][np.sign(P[1:]) != np.sign(P[:-1])]
    points = sorted({centre, *brk.tolist()})

    def f(r):
        v = closed_component(base, r)
        return v * v * math.exp(-2.0 * peak) if v else 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, lo, hi, points=points, epsabs=tol, epsrel=1e-13, limit=500)
        except integrate.IntegrationWarning as exc:
            raise NonConvergence(str(exc)) from exc
    if not (val > 0 and err <= max(tol, 1e-13 * val)):
        raise NonConvergence(f"quadrature error {err:.3g} above tolerance")
    return math.exp(-0.5 * (math.log(val) + 2.0 * peak))


def _log_beta(x: float, y: float) -> float:
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def _f32_unit(a1, a2, a3, b1, b2, n_terms):
    """3F2(a1, a2, a3; b1, b2; 1) for a terminating upper parameter, fsum-compensated."""
    terms = [1.0]
    t = 1.0
    for j in range(n_terms):
        t *= (a1 + j) * (a2 + j) * (a3 + j) / ((b1 + j) * (b2 + j) * (j + 1.0))
        if t == 0.0:
            break
        terms.append(t)
    return math.fsum(terms)


def _expansion_sum(n: int, eps: float, xi: float, prec: int) -> float:
    """log of sum_k sum_j t_k t_j (2eps)_{k+j} / (2eps+xi+2)_{k+j} in decimal arithmetic."""
    with localcontext() as ctx:
        ctx.prec = prec
        e2 = Decimal(2) * Decimal(eps)
        x = Decimal(xi)
        b = Decimal(n) + e2 + x + 1
        t = [Decimal(1)]
        for k in range(n):
            t.append(t[-1] * Decimal(k - n) * (b + k) / ((e2 + 1 + k) * (k + 1)))
        ratio = [Decimal(1)]
        for j in range(2 * n):
            ratio.append(ratio[-1] * (e2 + j) / (e2 + x + 2 + j))
        total = sum(t[k] * t[j] * ratio[k + j] for k in range(n + 1) for j in range(n + 1))
        if total <= 0:
            raise SeriesDivergence("expansion lost all significant digits")
        return float(total.ln())


def normalization_integral_series(
    n: int,
    eps: float,
    xi: float,
    variant: str = "expansion",
    rel_tol: float = 1e-14,
    max_terms: int = 10_000,
    prec: int = 80,
) -> float:
    """Unit-interval integral int_0^1 w^(2eps-1)(1-w)^(xi+1) [P_n^(2eps,xi)(1-2w)]^2 dw.

    ``variant="expansion"`` writes P_n(1-2w) = C sum_k t_k w^k with
    C = (2eps+1)_n / n! and t_k = (-n)_k (n+2eps+xi+1)_k / ((2eps+1)_k k!),
    integrates term by term with Beta functions,

        C^2 B(2eps, xi+2) sum_{k,j} t_k t_j (2eps)_{k+j} / (2eps+xi+2)_{k+j},

    and evaluates the alternating double sum in ``prec``-digit decimal
    arithmetic.  ``variant="closed"`` uses the Jacobi norm identity

        Gamma(n+2eps+1) Gamma(n+xi+1) / (n! Gamma(n+2eps+xi+1))
            * (1/(2eps) - 1/(2n+2eps+xi+1)).

    ``variant="printed"`` evaluates the alternative infinite m-series with
    the Gamma(n) prefactor, truncated when the running term stays below
    ``rel_tol`` of the partial sum for five consecutive terms; it is kept for
    comparison and does not reproduce the integral.
    """
    if n < 0 or eps <= 0 or xi <= -1:
        raise ParameterError("need n >= 0, eps > 0, xi > -1")
    if variant == "expansion":
        lc, _ = log_pochhammer(2.0 * eps + 1.0, n)
        lc -= math.lgamma(n + 1.0)
        return math.exp(2.0 * lc + _log_beta(2.0 * eps, xi + 2.0) + _expansion_sum(n, eps, xi, prec))
    if variant == "closed":
        al, be = 2.0 * eps, xi
        lg = (math.lgamma(n + al + 1.0) + math.lgamma(n + be + 1.0)
              - math.lgamma(n + 1.0) - math.lgamma(n + al + be + 1.0))
        return math.exp(lg) * (1.0 / al - 1.0 / (2.0 * n + al + be + 1.0))
    if variant == "printed":
        if n == 0:
            raise UnsupportedN("the printed series carries 1/Gamma(n), singular at n = 0")
        log_pref = math.lgamma(2.0 * eps + 1.0) + math.lgamma(xi + 2.0) - math.lgamma(n)
        b = 1.0 + n + 2.0 * eps + xi
        parts = []
        quiet = 0
        for m in range(max_terms):
            lp, sp = log_pochhammer(b, m)
            log_t = (
                lp
                + math.lgamma(n + m)
                - math.lgamma(m + 1.0)
                - math.lgamma(m + 2.0 * eps + 1.0)
                - math.lgamma(m + 2.0 * eps + xi + 2.0)
            )
            c = _f32_unit(2.0 * eps + m, -n, n + 1.0 + xi + 2.0 * eps,
                          m + 2.0 * eps + xi + 2.0, 1.0 + 2.0 * eps, n)
            term = (-1.0) ** m * sp * math.exp(log_t + log_pref) * c
            parts.append(term)
            total = math.fsum(parts)
            if abs(term) < rel_tol * abs(total):
                quiet += 1
                if quiet >= 5:
                    return total
            else:
                quiet = 0
        raise SeriesDivergence(f"no convergence within {max_terms} terms")
    raise ParameterError(f"unknown variant {variant!r}")


def normalize_series(s: SpinorState, variant: str = "expansion", rel_tol: float = 1e-14) -> float:
    """N from the unit-interval series.

    With w = |q| y the closed form becomes w^eps (1 - w)^nu P_n(1 - 2w) on
    w in [0, 1], which needs q < 0 and a pole at r >= 0; the measure adds the
    factor a |q|^(-2 eps).  At q = -1 this is exactly the unit-interval
    integral of :func:`normalization_integral_series`.

    Raises
    ------
    DomainError
        For q > 0 or when the pole lies at negative r.
    """
    p = s.p
    if p.q > 0:
        raise DomainError("series normalization needs the (1 - w) geometry, q < 0")
    rp = pole_radius(p)
    if rp < 0:
        raise DomainError("pole at negative r: the w-interval is truncated")
    integral = normalization_integral_series(s.qn.n, s.epsilon, s.xi, variant, rel_tol)
    if not integral > 0:
        raise SeriesDivergence(f"series sum {integral:.6g} is not positive")
    log_i = math.log(p.a) - 2.0 * s.epsilon * math.log(-p.q) + math.log(integral)
    return math.exp(-0.5 * log_i)
