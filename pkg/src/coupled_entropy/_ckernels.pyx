# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: Kasner fundamental branch, its inverse, power iteration.

Must stay numerically interchangeable with ``_pykernels``.
"""
import numpy as np

from libc.math cimport sin, cos, atan, floor, fabs, M_PI

cdef double THIRD_PI = M_PI / 3.0
cdef double TWO_THIRDS_PI = 2.0 * M_PI / 3.0
cdef double TWO_PI = 2.0 * M_PI


cdef inline double _phi0(double t) nogil:
    return M_PI - t - 2.0 * atan(sin(t) / (2.0 - cos(t)))


cdef inline double _phi0_deriv(double t) nogil:
    return -3.0 / (5.0 - 4.0 * cos(t))


cpdef double phi0(double t):
    return _phi0(t)


cpdef double phi0_deriv(double t):
    return _phi0_deriv(t)


cdef double _phi0_inverse(double v, double xtol) nogil:
    # phi0 is decreasing on [0, pi/3], from pi down to pi/3
    cdef double lo = 0.0, hi = THIRD_PI, mid
    if v >= _phi0(lo):
        return lo
    if v <= _phi0(hi):
        return hi
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _phi0(mid) > v:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


cpdef double phi0_inverse(double v, double xtol):
    return _phi0_inverse(v, xtol)


cdef inline double _kasner_angle(double theta) nogil:
    cdef double m = floor((theta + THIRD_PI) / TWO_THIRDS_PI)
    cdef double tp = theta - m * TWO_THIRDS_PI
    cdef double out
    if tp >= 0.0:
        out = _phi0(tp) + m * TWO_THIRDS_PI
    else:
        out = -_phi0(-tp) + m * TWO_THIRDS_PI
    out = out - TWO_PI * floor(out / TWO_PI)
    if out >= TWO_PI:
        out -= TWO_PI
    return out


cdef inline double _kasner_deriv(double theta) nogil:
    cdef double m = floor((theta + THIRD_PI) / TWO_THIRDS_PI)
    cdef double tp = theta - m * TWO_THIRDS_PI
    return _phi0_deriv(fabs(tp))


cpdef double kasner_angle(double theta):
    return _kasner_angle(theta)


cpdef double kasner_derivative(double theta):
    return _kasner_deriv(theta)


def kasner_angle_array(theta):
    cdef double[::1] x = np.ascontiguousarray(theta, dtype=np.float64).ravel()
    out = np.empty(x.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(x.shape[0]):
            o[i] = _kasner_angle(x[i])
    return out


def kasner_derivative_array(theta):
    cdef double[::1] x = np.ascontiguousarray(theta, dtype=np.float64).ravel()
    out = np.empty(x.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(x.shape[0]):
            o[i] = _kasner_deriv(x[i])
    return out


def power_iterate(a, double tol, long long max_iter):
    """Averaged power iteration with Collatz-Wielandt bracketing.

    Returns ``(lo, hi, vec, iterations)``; ``lo <= rho(a) <= hi`` for an
    irreducible nonnegative ``a``.
    """
    cdef double[:, ::1] m = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t n = m.shape[0]
    vec = np.ones(n, dtype=np.float64)
    work = np.empty(n, dtype=np.float64)
    cdef double[::1] v = vec
    cdef double[::1] w = work
    cdef Py_ssize_t i, j
    cdef long long it = 0
    cdef double s, r, lo = 0.0, hi = 0.0, vmax
    with nogil:
        while it < max_iter:
            it += 1
            lo = 1e308
            hi = -1e308
            for i in range(n):
                s = 0.0
                for j in range(n):
                    s += m[i, j] * v[j]
                w[i] = s
                r = s / v[i]
                if r < lo:
                    lo = r
                if r > hi:
                    hi = r
            if hi - lo <= tol:
                break
            vmax = 0.0
            for i in range(n):
                v[i] = 0.5 * (w[i] + v[i])
                if v[i] > vmax:
                    vmax = v[i]
            for i in range(n):
                v[i] = v[i] / vmax
    return lo, hi, vec, it
