"""Pure-Python twins of the compiled kernels.

Same algorithms, same operation order and same return conventions as
``_kernels.pyx``; used when the extension is unavailable or when
``WSDIRAC_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import math
import sys

import numpy as np
from scipy.integrate._ivp import dop853_coefficients as _dc

NS = 12
_A = [[float(_dc.A[i, j]) for j in range(NS)] for i in range(NS)]
_B = [float(v) for v in _dc.B[:NS]]
_C = [float(v) for v in _dc.C[:NS]]
_E3 = [float(v) for v in _dc.E3[: NS + 1]]
_E5 = [float(v) for v in _dc.E5[: NS + 1]]

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
BIG = 1e50
SMALL = 1e-50
_EPS = sys.float_info.epsilon


def _make_q(w, c0, c1, R0, a, q):
    exp = math.exp

    def Q(r):
        x = (r - R0) / a
        out = c0
        if w != 0.0:
            out += w / (r * r)
        if c1 != 0.0 and x < 700.0:
            out += c1 / (exp(x) + q)
        return out

    return Q


def integrate(r0, r1, f0, df0, w, c0, c1, R0, a, q,
              rtol=1e-12, length=1.0, max_steps=1000000):
    """Advance (F, F') from ``r0`` to ``r1``; see the compiled twin."""
    Q = _make_q(float(w), float(c0), float(c1), float(R0), float(a), float(q))
    A, B, C, E3, E5 = _A, _B, _C, _E3, _E5
    fabs = abs
    t = float(r0)
    r1 = float(r1)
    y0 = float(f0)
    y1 = float(df0)
    logs = 0.0
    direction = 1.0 if r1 >= t else -1.0
    span = fabs(r1 - t)
    h_abs = 1e-3 * length
    count = 0
    nsteps = 0
    if span == 0.0:
        return y0, y1, 0.0, 0, 0, 0
    if h_abs > span:
        h_abs = span
    last_sign = math.copysign(1.0, y0) if y0 != 0.0 else 0.0
    K0 = [0.0] * (NS + 1)
    K1 = [0.0] * (NS + 1)

    while direction * (t - r1) < 0.0:
        min_step = 10.0 * fabs(t) * _EPS
        if h_abs > fabs(r1 - t):
            h_abs = fabs(r1 - t)
        rejected = False
        while True:
            if nsteps >= max_steps:
                return y0, y1, logs, count, nsteps, 2
            if h_abs < min_step:
                return y0, y1, logs, count, nsteps, 1
            h = direction * h_abs
            nsteps += 1
            K0[0] = y1
            K1[0] = Q(t) * y0
            for s in range(1, NS):
                As = A[s]
                d0 = 0.0
                d1 = 0.0
                for j in range(s):
                    d0 += K0[j] * As[j]
                    d1 += K1[j] * As[j]
                s0 = y0 + d0 * h
                s1 = y1 + d1 * h
                K0[s] = s1
                K1[s] = Q(t + C[s] * h) * s0
            d0 = 0.0
            d1 = 0.0
            for j in range(NS):
                d0 += K0[j] * B[j]
                d1 += K1[j] * B[j]
            yn0 = y0 + h * d0
            yn1 = y1 + h * d1
            K0[NS] = yn1
            K1[NS] = Q(t + h) * yn0

            sc0 = rtol * (max(fabs(y0), fabs(yn0))
                          + length * max(fabs(y1), fabs(yn1))) + 1e-300
            sc1 = sc0 / length
            e50 = e51 = e30 = e31 = 0.0
            for j in range(NS + 1):
                e50 += K0[j] * E5[j]
                e51 += K1[j] * E5[j]
                e30 += K0[j] * E3[j]
                e31 += K1[j] * E3[j]
            e50 /= sc0
            e51 /= sc1
            e30 /= sc0
            e31 /= sc1
            n5 = e50 * e50 + e51 * e51
            n3 = e30 * e30 + e31 * e31
            if n5 == 0.0 and n3 == 0.0:
                err = 0.0
            else:
                err = h_abs * n5 / math.sqrt((n5 + 0.01 * n3) * 2.0)

            if err < 1.0:
                if err == 0.0:
                    factor = MAX_FACTOR
                else:
                    factor = min(MAX_FACTOR, SAFETY * err ** -0.125)
                if rejected and factor > 1.0:
                    factor = 1.0
                t = t + h
                if direction * (t - r1) > 0.0 or fabs(r1 - t) < min_step:
                    t = r1
                y0 = yn0
                y1 = yn1
                h_abs *= factor
                break
            h_abs *= max(MIN_FACTOR, SAFETY * err ** -0.125)
            rejected = True

        if y0 != 0.0:
            sign = math.copysign(1.0, y0)
            if last_sign != 0.0 and sign != last_sign:
                count += 1
            last_sign = sign
        mag = fabs(y0) + length * fabs(y1)
        if mag > BIG or 0.0 < mag < SMALL:
            y0 /= mag
            y1 /= mag
            logs += math.log(mag)

    return y0, y1, logs, count, nsteps, 0


def jacobi_array(n, alpha, beta, x):
    """P_n^(alpha, beta) on an array by the three-term recurrence."""
    x = np.asarray(x, dtype=np.float64)
    if n == 0:
        return np.ones_like(x)
    ab = alpha + beta
    p0 = np.ones_like(x)
    p1 = (alpha + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0)
    for k in range(1, n):
        c = 2.0 * k + ab
        a1 = 2.0 * (k + 1) * (k + ab + 1.0) * c
        a2 = (c + 1.0) * (alpha * alpha - beta * beta)
        a3 = c * (c + 1.0) * (c + 2.0)
        a4 = 2.0 * (k + alpha) * (k + beta) * (c + 2.0)
        p0, p1 = p1, ((a2 + a3 * x) * p1 - a4 * p0) / a1
    return p1
