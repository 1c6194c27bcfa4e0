"""Parametric Nikiforov-Uvarov engine.

A second-order equation of the form

    u'' + (c1 - c2 z) / (z (1 - c3 z)) u'
        + (-B1 z^2 + B2 z - B3) / (z (1 - c3 z))^2 u = 0

is described by six numbers (:class:`NuTemplate`).  Everything the method
needs, the constants c4..c13, the key polynomials, the energy condition
and the polynomial solution, follows from them by arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, NegativeDiscriminant, ParameterError
from .special import hyp2f1_terminating, jacobi

__all__ = [
    "NuTemplate",
    "NuConstants",
    "KeyPolynomials",
    "derive_nu_constants",
    "key_polynomials",
    "nu_energy_residual",
    "nu_wavefunction",
    "nu_wavefunction_2f1",
]


@dataclass(frozen=True)
class NuTemplate:
    """Six coefficients of the parametric NU equation."""

    c1: float
    c2: float
    c3: float
    B1: float
    B2: float
    B3: float

    def __post_init__(self):
        if self.c3 == 0:
            raise ParameterError("c3 must be nonzero")


@dataclass(frozen=True)
class NuConstants:
    """Derived constants c4..c13; ``c3`` is carried along from the template."""

    c4: float
    c5: float
    c6: float
    c7: float
    c8: float
    c9: float
    c10: float
    c11: float
    c12: float
    c13: float
    c3: float

    @property
    def sqrt_c8(self) -> float:
        return math.sqrt(self.c8)

    @property
    def sqrt_c9(self) -> float:
        return math.sqrt(self.c9)


class KeyPolynomials(NamedTuple):
    """Coefficients of pi(z) and tau(z) as (constant, slope) pairs."""

    pi_coeffs: tuple[float, float]
    k_value: float
    tau_coeffs: tuple[float, float]
    tau_slope: float
    admissible: bool


def derive_nu_constants(t: NuTemplate) -> NuConstants:
    """Compute c4..c13 from a template using principal square roots.

    Raises
    ------
    NegativeDiscriminant
        If c8 or c9 is negative.
    """
    c4 = 0.5 * (1.0 - t.c1)
    c5 = 0.5 * (t.c2 - 2.0 * t.c3)
    c6 = c5 * c5 + t.B1
    c7 = 2.0 * c4 * c5 - t.B2
    c8 = c4 * c4 + t.B3
    c9 = t.c3 * (c7 + t.c3 * c8) + c6
    if c8 < 0.0:
        raise NegativeDiscriminant(f"c8 = {c8!r} < 0")
    if c9 < 0.0:
        raise NegativeDiscriminant(f"c9 = {c9!r} < 0")
    r8 = math.sqrt(c8)
    r9 = math.sqrt(c9)
    c10 = t.c1 + 2.0 * c4 + 2.0 * r8 - 1.0
    c11 = 1.0 - t.c1 - 2.0 * c4 + (2.0 / t.c3) * r9
    c12 = c4 + r8
    c13 = -c4 + (r9 - c5) / t.c3
    return NuConstants(c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, t.c3)


def key_polynomials(t: NuTemplate, k: NuConstants) -> KeyPolynomials:
    """Return pi(z), k, tau(z) and tau'.

    ``admissible`` is true when tau' < 0, the usual NU requirement for a
    normalizable polynomial solution.
    """
    r8, r9 = k.sqrt_c8, k.sqrt_c9
    slope = r9 + t.c3 * r8
    pi_coeffs = (k.c4 + r8, k.c5 - slope)
    k_value = -(k.c7 + 2.0 * t.c3 * k.c8) - 2.0 * math.sqrt(k.c8 * k.c9)
    tau_coeffs = (1.0 + 2.0 * r8, -(t.c2 - 2.0 * k.c5) - 2.0 * slope)
    tau_slope = -2.0 * t.c3 - 2.0 * slope
    return KeyPolynomials(pi_coeffs, k_value, tau_coeffs, tau_slope, tau_slope < 0.0)


def nu_energy_residual(t: NuTemplate, k: NuConstants, n: int) -> float:
    """Left side of the NU energy condition for radial quantum number ``n``."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    r8, r9 = k.sqrt_c8, k.sqrt_c9
    m = 2 * n + 1
    terms = (
        (t.c2 - t.c3) * n,
        t.c3 * n * n,
        -m * k.c5,
        m * (r9 + t.c3 * r8),
        k.c7,
        2.0 * t.c3 * k.c8,
        2.0 * math.sqrt(k.c8 * k.c9),
    )
    return math.fsum(terms)


def nu_wavefunction(k: NuConstants, n: int, z: float) -> float:
    """Unnormalized u_n(z) = z^c12 (1 - c3 z)^c13 P_n^(c10, c11)(1 - 2 c3 z).

    Parameters
    ----------
    k : NuConstants
        Constants of the template.
    n : int
        Polynomial degree.
    z : float
        Point with ``0 <= c3*z <= 1``.  For c3 < 0 this is z <= 0 and the
        power z^c12 is taken of ``|z|``.
    """
    base, w = _boundary_factors(k, z)
    if n == 0:
        return base
    return base * float(jacobi(n, k.c10, k.c11, 1.0 - 2.0 * w))


def nu_wavefunction_2f1(k: NuConstants, n: int, z: float) -> float:
    """Same state in hypergeometric form, z^c12 (1 - c3 z)^c13 2F1(-n, n + c10 + c11 + 1; c10 + 1; c3 z).

    Differs from :func:`nu_wavefunction` by the factor (c10 + 1)_n / n!.
    """
    base, w = _boundary_factors(k, z)
    return base * float(hyp2f1_terminating(n, n + k.c10 + k.c11 + 1.0, k.c10 + 1.0, w))


def _boundary_factors(k: NuConstants, z: float) -> tuple[float, float]:
    w = k.c3 * z
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"c3*z = {w!r} outside [0, 1]")
    if z == 0.0:
        base = 1.0 if k.c12 == 0 else 0.0
    else:
        base = abs(z) ** k.c12
    base *= (1.0 - w) ** k.c13 if w < 1.0 else (1.0 if k.c13 == 0 else 0.0)
    return base, w
