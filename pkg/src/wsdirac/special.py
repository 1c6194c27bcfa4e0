"""Jacobi polynomials and terminating Gauss hypergeometric sums.

The two routes are deliberately independent: :func:`jacobi` runs the
three-term recurrence (compiled when available), :func:`hyp2f1_terminating`
sums the finite 2F1 series term by term in double-double arithmetic.
"""

from __future__ import annotations

import math

import numpy as np

from . import _backend
from .errors import ParameterError, PoleInC

__all__ = ["jacobi", "hyp2f1_terminating", "hyp2f1_terms", "log_pochhammer"]


def _check_n(n) -> int:
    if int(n) != n or n < 0:
        raise ParameterError(f"n must be a nonnegative integer, got {n!r}")
    return int(n)


def jacobi(n: int, alpha: float, beta: float, x):
    """Jacobi polynomial P_n^(alpha, beta)(x).

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.
    alpha, beta : float
        Parameters, both ``> -1``.
    x : float or array_like
        Evaluation points.

    Returns
    -------
    float or ndarray
        Same shape as ``x``.
    """
    n = _check_n(n)
    if not alpha > -1.0:
        raise ParameterError(f"alpha must exceed -1, got {alpha!r}")
    if not beta > -1.0:
        raise ParameterError(f"beta must exceed -1, got {beta!r}")
    scalar = np.ndim(x) == 0
    out = _backend.jacobi_array(n, float(alpha), float(beta), np.asarray(x, dtype=float))
    return float(out) if scalar else out


def hyp2f1_terms(n: int, b: float, c: float, z):
    """Individual terms of 2F1(-n, b; c; z) as an array of shape (n+1, ...)."""
    n = _check_n(n)
    for k in range(n):
        if c + k == 0.0:
            raise PoleInC(f"(c)_k vanishes: c = {c!r}, k = {k}")
    z = np.asarray(z, dtype=float)
    terms = np.empty((n + 1,) + z.shape)
    t = np.ones_like(z)
    terms[0] = t
    for k in range(n):
        t = t * ((k - n) * (b + k) / ((c + k) * (k + 1.0))) * z
        terms[k + 1] = t
    return terms


# double-double helpers: a value is a pair (hi, lo) with |lo| <= ulp(hi)/2
_SPLIT = 134217729.0  # 2^27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _fast_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(x, y):
    s, e = _two_sum(x[0], y[0])
    t, f = _two_sum(x[1], y[1])
    s, e = _fast_two_sum(s, e + t)
    return _fast_two_sum(s, e + f)


def _dd_mul(x, y):
    p, e = _two_prod(x[0], y[0])
    return _fast_two_sum(p, e + (x[0] * y[1] + x[1] * y[0]))


def _dd_div(x, y):
    q1 = x[0] / y[0]
    r = _dd_add(x, _dd_neg(_dd_mul((q1, 0.0 * q1), y)))
    q2 = r[0] / y[0]
    r = _dd_add(r, _dd_neg(_dd_mul((q2, 0.0 * q2), y)))
    q3 = r[0] / y[0]
    hi, lo = _fast_two_sum(q1, q2)
    return _dd_add((hi, lo), (q3, 0.0 * q3))


def _dd_neg(x):
    return -x[0], -x[1]


def hyp2f1_terminating(n: int, b: float, c: float, z):
    """Terminating series 2F1(-n, b; c; z) = sum_k (-n)_k (b)_k / ((c)_k k!) z^k.

    Terms and their running sum are carried in double-double arithmetic, so
    the result is accurate to working precision even when the alternating
    terms cancel by many orders of magnitude (z near 1, large b).

    Raises
    ------
    PoleInC
        If ``c + k = 0`` for some ``0 <= k < n``.
    """
    n = _check_n(n)
    for k in range(n):
        if c + k == 0.0:
            raise PoleInC(f"(c)_k vanishes: c = {c!r}, k = {k}")
    z = np.asarray(z, dtype=float)
    zero = np.zeros_like(z)
    zz = (z, zero)
    term = (np.ones_like(z), zero)
    total = term
    for k in range(n):
        num = _dd_mul(_two_sum(float(b), float(k)), (float(k - n), 0.0))
        den = _dd_mul(_two_sum(float(c), float(k)), (float(k + 1), 0.0))
        ratio = _dd_div(num, den)
        term = _dd_mul(_dd_mul(term, (ratio[0] + zero, ratio[1] + zero)), zz)
        total = _dd_add(total, term)
    out = total[0] + total[1]
    return float(out) if out.ndim == 0 else out


def log_pochhammer(x: float, k: int) -> tuple[float, float]:
    """Return ``(log|(x)_k|, sign)`` of the rising factorial via log-gamma."""
    if k == 0:
        return 0.0, 1.0
    if x > 0:
        return math.lgamma(x + k) - math.lgamma(x), 1.0
    log = 0.0
    sign = 1.0
    for j in range(k):
        v = x + j
        if v == 0.0:
            return -math.inf, 0.0
        log += math.log(abs(v))
        sign *= math.copysign(1.0, v)
    return log, sign
