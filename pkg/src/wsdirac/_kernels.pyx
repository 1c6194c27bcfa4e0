# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: radial ODE integration and Jacobi recurrence.

The integrator advances F'' = Q(r) F with
Q(r) = w / r^2 + c0 + c1 / (exp((r - R0)/a) + q)
using the explicit 8(5,3) Dormand-Prince pair with the step-size control
of scipy's DOP853.  The state is renormalized whenever its magnitude leaves
[1e-50, 1e50]; the accumulated logarithm of the scale is returned.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs, log, sqrt, pow, copysign
from libc.float cimport DBL_EPSILON

from scipy.integrate._ivp import dop853_coefficients as _dc

cnp.import_array()

cdef enum:
    NS = 12

cdef double _A[NS][NS]
cdef double _B[NS]
cdef double _C[NS]
cdef double _E3[NS + 1]
cdef double _E5[NS + 1]

cdef int _i, _j
for _i in range(NS):
    _B[_i] = _dc.B[_i]
    _C[_i] = _dc.C[_i]
    for _j in range(NS):
        _A[_i][_j] = _dc.A[_i, _j]
for _i in range(NS + 1):
    _E3[_i] = _dc.E3[_i]
    _E5[_i] = _dc.E5[_i]

cdef double SAFETY = 0.9
cdef double MIN_FACTOR = 0.2
cdef double MAX_FACTOR = 10.0
cdef double BIG = 1e50
cdef double SMALL = 1e-50


cdef inline double fmax2(double x, double y) nogil:
    return x if x >= y else y


cdef inline double _q(double r, double w, double c0, double c1,
                      double R0, double a, double q) nogil:
    cdef double x = (r - R0) / a
    cdef double out = c0
    if w != 0.0:
        out += w / (r * r)
    if c1 != 0.0 and x < 700.0:
        out += c1 / (exp(x) + q)
    return out


cdef int _run(double r0, double r1, double* f, double* df, double* logs,
              long* nodes, long* steps, double w, double c0, double c1,
              double R0, double a, double q, double rtol, double length,
              long max_steps) nogil:
    cdef double t = r0
    cdef double y0 = f[0]
    cdef double y1 = df[0]
    cdef double direction = 1.0 if r1 >= r0 else -1.0
    cdef double span = fabs(r1 - r0)
    cdef double h_abs = 1e-3 * length
    cdef double K0[NS + 1]
    cdef double K1[NS + 1]
    cdef double h, s0, s1, d0, d1, yn0, yn1, sc0, sc1
    cdef double e50, e51, e30, e31, n5, n3, err, factor, mag, min_step
    cdef int s, j, rejected
    cdef double last_sign = 0.0
    cdef long count = 0
    cdef long nsteps = 0

    if span == 0.0:
        return 0
    if h_abs > span:
        h_abs = span
    if y0 != 0.0:
        last_sign = copysign(1.0, y0)

    while direction * (t - r1) < 0.0:
        min_step = 10.0 * fabs(t) * DBL_EPSILON
        if h_abs > fabs(r1 - t):
            h_abs = fabs(r1 - t)
        rejected = 0
        while True:
            if nsteps >= max_steps:
                return 2
            if h_abs < min_step:
                return 1
            h = direction * h_abs
            nsteps += 1
            K0[0] = y1
            K1[0] = _q(t, w, c0, c1, R0, a, q) * y0
            for s in range(1, NS):
                d0 = 0.0
                d1 = 0.0
                for j in range(s):
                    d0 += K0[j] * _A[s][j]
                    d1 += K1[j] * _A[s][j]
                s0 = y0 + d0 * h
                s1 = y1 + d1 * h
                K0[s] = s1
                K1[s] = _q(t + _C[s] * h, w, c0, c1, R0, a, q) * s0
            d0 = 0.0
            d1 = 0.0
            for j in range(NS):
                d0 += K0[j] * _B[j]
                d1 += K1[j] * _B[j]
            yn0 = y0 + h * d0
            yn1 = y1 + h * d1
            K0[NS] = yn1
            K1[NS] = _q(t + h, w, c0, c1, R0, a, q) * yn0

            sc0 = rtol * (fmax2(fabs(y0), fabs(yn0))
                          + length * fmax2(fabs(y1), fabs(yn1))) + 1e-300
            sc1 = sc0 / length
            e50 = 0.0
            e51 = 0.0
            e30 = 0.0
            e31 = 0.0
            for j in range(NS + 1):
                e50 += K0[j] * _E5[j]
                e51 += K1[j] * _E5[j]
                e30 += K0[j] * _E3[j]
                e31 += K1[j] * _E3[j]
            e50 /= sc0
            e51 /= sc1
            e30 /= sc0
            e31 /= sc1
            n5 = e50 * e50 + e51 * e51
            n3 = e30 * e30 + e31 * e31
            if n5 == 0.0 and n3 == 0.0:
                err = 0.0
            else:
                err = h_abs * n5 / sqrt((n5 + 0.01 * n3) * 2.0)

            if err < 1.0:
                if err == 0.0:
                    factor = MAX_FACTOR
                else:
                    factor = SAFETY * pow(err, -0.125)
                    if factor > MAX_FACTOR:
                        factor = MAX_FACTOR
                if rejected and factor > 1.0:
                    factor = 1.0
                t = t + h
                if direction * (t - r1) > 0.0 or fabs(r1 - t) < min_step:
                    t = r1
                y0 = yn0
                y1 = yn1
                h_abs *= factor
                break
            factor = SAFETY * pow(err, -0.125)
            if factor < MIN_FACTOR:
                factor = MIN_FACTOR
            h_abs *= factor
            rejected = 1

        if y0 != 0.0:
            if last_sign != 0.0 and copysign(1.0, y0) != last_sign:
                count += 1
            last_sign = copysign(1.0, y0)
        mag = fabs(y0) + length * fabs(y1)
        if mag > BIG or (mag < SMALL and mag > 0.0):
            y0 /= mag
            y1 /= mag
            logs[0] += log(mag)

    f[0] = y0
    df[0] = y1
    nodes[0] += count
    steps[0] += nsteps
    return 0


def integrate(double r0, double r1, double f0, double df0, double w,
              double c0, double c1, double R0, double a, double q,
              double rtol=1e-12, double length=1.0, long max_steps=1000000):
    """Advance (F, F') from ``r0`` to ``r1``.

    Returns
    -------
    tuple
        ``(f, df, log_scale, nodes, steps, status)`` where the true values
        are ``f*exp(log_scale)`` and ``df*exp(log_scale)``.  ``status`` is 0
        on success, 1 on step-size underflow, 2 when ``max_steps`` is hit.
    """
    cdef double f = f0
    cdef double df = df0
    cdef double logs = 0.0
    cdef long nodes = 0
    cdef long steps = 0
    cdef int status
    with nogil:
        status = _run(r0, r1, &f, &df, &logs, &nodes, &steps, w, c0, c1,
                      R0, a, q, rtol, length, max_steps)
    return f, df, logs, nodes, steps, status


def jacobi_array(int n, double alpha, double beta, x):
    """P_n^(alpha, beta) on a float64 array by the three-term recurrence."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(
        np.ravel(x), dtype=np.float64)
    cdef Py_ssize_t m = xs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef double[::1] xv = xs
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef int k
    cdef double ab = alpha + beta
    cdef double p0, p1, p2, xi, c, a1, a2, a3, a4
    with nogil:
        for i in range(m):
            xi = xv[i]
            if n == 0:
                ov[i] = 1.0
                continue
            p0 = 1.0
            p1 = (alpha + 1.0) + 0.5 * (ab + 2.0) * (xi - 1.0)
            for k in range(1, n):
                c = 2.0 * k + ab
                a1 = 2.0 * (k + 1) * (k + ab + 1.0) * c
                a2 = (c + 1.0) * (alpha * alpha - beta * beta)
                a3 = c * (c + 1.0) * (c + 2.0)
                a4 = 2.0 * (k + alpha) * (k + beta) * (c + 2.0)
                p2 = ((a2 + a3 * xi) * p1 - a4 * p0) / a1
                p0 = p1
                p1 = p2
            ov[i] = p1
    return out.reshape(np.shape(x))
