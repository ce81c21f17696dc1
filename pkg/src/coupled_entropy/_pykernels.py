"""Pure-Python twins of the routines in ``_ckernels.pyx``."""
import math

import numpy as np

THIRD_PI = math.pi / 3.0
TWO_THIRDS_PI = 2.0 * math.pi / 3.0
TWO_PI = 2.0 * math.pi


def phi0(t):
    return math.pi - t - 2.0 * math.atan(math.sin(t) / (2.0 - math.cos(t)))


def phi0_deriv(t):
    return -3.0 / (5.0 - 4.0 * math.cos(t))


def phi0_inverse(v, xtol):
    lo, hi = 0.0, THIRD_PI
    if v >= phi0(lo):
        return lo
    if v <= phi0(hi):
        return hi
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if phi0(mid) > v:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def kasner_angle(theta):
    m = math.floor((theta + THIRD_PI) / TWO_THIRDS_PI)
    tp = theta - m * TWO_THIRDS_PI
    if tp >= 0.0:
        out = phi0(tp) + m * TWO_THIRDS_PI
    else:
        out = -phi0(-tp) + m * TWO_THIRDS_PI
    out = out - TWO_PI * math.floor(out / TWO_PI)
    if out >= TWO_PI:
        out -= TWO_PI
    return out


def kasner_derivative(theta):
    m = math.floor((theta + THIRD_PI) / TWO_THIRDS_PI)
    return phi0_deriv(abs(theta - m * TWO_THIRDS_PI))


def kasner_angle_array(theta):
    x = np.ascontiguousarray(theta, dtype=np.float64).ravel()
    return np.array([kasner_angle(float(t)) for t in x], dtype=np.float64)


def kasner_derivative_array(theta):
    x = np.ascontiguousarray(theta, dtype=np.float64).ravel()
    return np.array([kasner_derivative(float(t)) for t in x], dtype=np.float64)


def power_iterate(a, tol, max_iter):
    m = np.ascontiguousarray(a, dtype=np.float64)
    v = np.ones(m.shape[0])
    lo = hi = 0.0
    it = 0
    while it < max_iter:
        it += 1
        w = m @ v
        ratios = w / v
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= tol:
            break
        v = 0.5 * (w + v)
        v /= v.max()
    return lo, hi, v, it
