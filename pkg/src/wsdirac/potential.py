"""Generalized Woods-Saxon potential and Pekeris-type coefficients.

The potential is V(r) = -V0 y / (1 + q y) with y = exp(-(r - R0)/a).  The
centrifugal factor 1/r^2 = (1/R0^2)(1 + x)^-2, x = (r - R0)/R0, is replaced
by D0 + D1 g(x) + D2 g(x)^2 where g(x) = -exp(-alpha x) / (1 + q exp(-alpha x))
and alpha = R0/a.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import DomainError, ParameterError, PoleError, SingularSystem

__all__ = [
    "PotentialParams",
    "PekerisSource",
    "PekerisCoefficients",
    "CentrifugalError",
    "eval_gws",
    "eval_gws_shifted",
    "eval_ws_standard",
    "pole_radius",
    "shape_g",
    "pekeris_paper",
    "pekeris_taylor",
    "pekeris_coefficients",
    "matching_residuals",
    "centrifugal_error",
    "pekeris_discrepancy",
]

POLE_TOL = 1e-12
DEFAULT_RADIUS_FACTOR = 10.0


@dataclass(frozen=True)
class PotentialParams:
    """Parameters of the generalized Woods-Saxon well.

    Attributes
    ----------
    V0 : float
        Depth (energy units); either sign is accepted.
    q : float
        Shape parameter, nonzero.
    a : float
        Surface thickness (length units), positive.
    R0 : float or None
        Well radius.  ``None`` means "not given"; see :meth:`with_radius`.
    hbar_c : float
        Conversion constant, 1 in natural units.
    """

    V0: float
    q: float
    a: float
    R0: float | None = None
    hbar_c: float = 1.0

    def __post_init__(self):
        for name in ("V0", "q", "a", "hbar_c"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.q == 0:
            raise ParameterError("q must be nonzero")
        if not self.a > 0:
            raise ParameterError("a must be positive")
        if not self.hbar_c > 0:
            raise ParameterError("hbar_c must be positive")
        if self.R0 is not None and not (math.isfinite(self.R0) and self.R0 >= 0):
            raise ParameterError("R0 must be finite and nonnegative")

    @property
    def alpha(self) -> float:
        """Dimensionless ratio R0/a."""
        return self.radius / self.a

    @property
    def radius(self) -> float:
        if self.R0 is None:
            raise ParameterError("R0 is required here but was not given")
        return self.R0

    def with_radius(self, warn: bool = True) -> "PotentialParams":
        """Return a copy with R0 filled in (10 a when missing)."""
        if self.R0 is not None:
            return self
        R0 = DEFAULT_RADIUS_FACTOR * self.a
        if warn:
            warnings.warn(
                f"R0 not given; using R0 = {DEFAULT_RADIUS_FACTOR:g} a = {R0:g}",
                stacklevel=2,
            )
        return replace(self, R0=R0)


class PekerisSource(str, Enum):
    PAPER = "paper"
    TAYLOR = "taylor"


@dataclass(frozen=True)
class PekerisCoefficients:
    D0: float
    D1: float
    D2: float
    source: PekerisSource


class CentrifugalError(NamedTuple):
    sup_rel_error: float
    argmax_x: float


def pole_radius(p: PotentialParams) -> float | None:
    """Radius where 1 + q y = 0, or ``None`` if there is no real pole."""
    if p.q > 0:
        return None
    return p.radius + p.a * math.log(-p.q)


def eval_gws(p: PotentialParams, r):
    """Potential energy at radius ``r`` (scalar or array).

    Raises
    ------
    PoleError
        If ``|1 + q y| < 1e-12`` at a requested point.
    """
    R0 = p.radius
    r_arr = np.asarray(r, dtype=float)
    t = (r_arr - R0) / p.a
    with np.errstate(over="ignore"):
        y = np.exp(-t)
        den = 1.0 + p.q * y
        if p.q < 0 and np.any(np.abs(den) < POLE_TOL):
            raise PoleError("evaluation point on the pole of the potential")
        v = -p.V0 / (np.exp(t) + p.q)
    return float(v) if np.ndim(r) == 0 else v


def eval_gws_shifted(p: PotentialParams, r):
    """Same potential written with V0' = V0 e^{R0/a}, q' = q e^{R0/a}."""
    s = math.exp(p.radius / p.a)
    r_arr = np.asarray(r, dtype=float)
    u = np.exp(-r_arr / p.a)
    v = -(p.V0 * s) * u / (1.0 + (p.q * s) * u)
    return float(v) if np.ndim(r) == 0 else v


def eval_ws_standard(V0: float, a: float, R0: float, r):
    """Standard Woods-Saxon form -V0 / (1 + exp((r - R0)/a))."""
    r_arr = np.asarray(r, dtype=float)
    with np.errstate(over="ignore"):
        v = -V0 / (1.0 + np.exp((r_arr - R0) / a))
    return float(v) if np.ndim(r) == 0 else v


def shape_g(p: PotentialParams, x):
    """Basis function g(x) = -exp(-alpha x) / (1 + q exp(-alpha x))."""
    u = np.exp(-p.alpha * np.asarray(x, dtype=float))
    return -u / (1.0 + p.q * u)


def _shape_derivs(p: PotentialParams) -> tuple[float, float, float]:
    q, al = p.q, p.alpha
    g0 = -1.0 / (1.0 + q)
    g1 = al / (1.0 + q) ** 2
    g2 = -(al ** 2) * (1.0 - q) / (1.0 + q) ** 3
    return g0, g1, g2


def _matching_system(p: PotentialParams):
    g0, g1, g2 = _shape_derivs(p)
    M = np.array(
        [
            [1.0, g0, g0 * g0],
            [0.0, g1, 2.0 * g0 * g1],
            [0.0, g2, 2.0 * g1 * g1 + 2.0 * g0 * g2],
        ]
    )
    return M, np.array([1.0, -2.0, 6.0])


def pekeris_taylor(p: PotentialParams) -> PekerisCoefficients:
    """Coefficients matching (1+x)^-2 to second order at x = 0.

    Raises
    ------
    SingularSystem
        For q = -1, where g(0) diverges, or when R0 = 0.
    """
    if p.q == -1.0:
        raise SingularSystem("q = -1: g(0) diverges; use s-wave mode")
    if not p.radius > 0:
        raise SingularSystem("R0 must be positive")
    M, rhs = _matching_system(p)
    try:
        D = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(D)):
        raise SingularSystem("non-finite coefficients")
    return PekerisCoefficients(float(D[0]), float(D[1]), float(D[2]), PekerisSource.TAYLOR)


def matching_residuals(p: PotentialParams, d: PekerisCoefficients) -> np.ndarray:
    """Residuals of the three tangency equations for coefficients ``d``."""
    M, rhs = _matching_system(p)
    return M @ np.array([d.D0, d.D1, d.D2]) - rhs


def pekeris_paper(p: PotentialParams) -> PekerisCoefficients:
    """Coefficients from the closed forms as printed, with exp(-alpha) reading.

    The printed D1 has two identical bracketed factors, so it collapses to
    -2 (e^alpha + 1)(1 + e^-alpha); it is evaluated literally regardless.
    """
    al = p.alpha
    if not al > 0:
        raise ParameterError("R0 must be positive")
    em = math.exp(-al)
    ep = math.exp(al)
    b = (1.0 + em) / al
    D0 = 1.0 - b * b * (4.0 * al / (1.0 + em) - 3.0 - al)
    D1 = 2.0 * (ep + 1.0) * (3.0 * b - (3.0 + al) * b)
    D2 = (ep + 1.0) ** 2 * b * b * (3.0 + al - 2.0 * al / (1.0 + em))
    return PekerisCoefficients(D0, D1, D2, PekerisSource.PAPER)


def pekeris_coefficients(p: PotentialParams, source: PekerisSource | str = "taylor"):
    """Dispatch on ``source``."""
    source = PekerisSource(source)
    return pekeris_taylor(p) if source is PekerisSource.TAYLOR else pekeris_paper(p)


def centrifugal_error(
    p: PotentialParams,
    d: PekerisCoefficients,
    x_lo: float,
    x_hi: float,
    points: int = 2001,
) -> CentrifugalError:
    """Sup of the relative error of the quadratic surrogate on a uniform grid."""
    if not x_lo < x_hi:
        raise DomainError("x_lo must be below x_hi")
    if x_lo <= -1.0:
        raise DomainError("interval touches x = -1")
    if points < 1000:
        raise DomainError("grid needs at least 1000 points")
    x = np.linspace(x_lo, x_hi, points)
    g = shape_g(p, x)
    exact = (1.0 + x) ** -2
    rel = np.abs(d.D0 + d.D1 * g + d.D2 * g * g - exact) / exact
    i = int(np.argmax(rel))
    return CentrifugalError(float(rel[i]), float(x[i]))


def pekeris_discrepancy(p: PotentialParams, x_lo: float = -0.2, x_hi: float = 0.2) -> dict:
    """Side-by-side comparison of both coefficient sets on one interval."""
    taylor = pekeris_taylor(p)
    paper = pekeris_paper(p)
    et = centrifugal_error(p, taylor, x_lo, x_hi)
    ep = centrifugal_error(p, paper, x_lo, x_hi)
    al = p.alpha
    collapsed = -2.0 * (math.exp(al) + 1.0) * (1.0 + math.exp(-al))
    return {
        "alpha": al,
        "q": p.q,
        "x_lo": x_lo,
        "x_hi": x_hi,
        "taylor": taylor,
        "paper": paper,
        "taylor_error": et,
        "paper_error": ep,
        "paper_D1_collapsed": collapsed,
        "paper_D1_identical_factors": math.isclose(paper.D1, collapsed, rel_tol=1e-12),
        "paper_residuals": matching_residuals(p, paper),
    }
