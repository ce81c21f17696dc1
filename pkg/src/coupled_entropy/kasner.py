"""The Kasner circle map.

On the fundamental arc [0, pi/3] the map is

    phi0(t) = pi - t - 2 atan(sin t / (2 - cos t)),

and it is extended to the whole circle by the dihedral symmetry generated by
rotation through 2*pi/3 and the reflection t -> -t, both of which commute
with the map. Differentiating gives phi0'(t) = -3 / (5 - 4 cos t), so
|derivative| lies in [1, 3] and equals 1 only at the three special points.

An independent construction, :func:`kasner_geometric`, projects along
chords through (2, 0), (-1, -sqrt 3) or (-1, sqrt 3) depending on the arc.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AtSpecialPoint, SlowConvergence
from .onedmap import CIRCLE, XTOL, Arc, Branch, Partition, PiecewiseMonotoneMap
from .subshift import SymbolSequence
from .trans_matrix import validate_transition

TWO_PI = 2.0 * math.pi
THIRD = math.pi / 3.0

T1 = math.pi / 3.0
T2 = 5.0 * math.pi / 3.0
T3 = math.pi
SPECIAL_POINTS = (T1, T2, T3)

A0 = validate_transition([[0, 1, 1], [1, 0, 1], [1, 1, 0]])

# arcs between the special points
LAMBDA1 = Arc(T2, 2.0 * THIRD)
LAMBDA2 = Arc(T3, 2.0 * THIRD)
LAMBDA3 = Arc(T1, 2.0 * THIRD)

# chord projection centres for arcs 1, 2, 3
PROJECTION_POINTS = ((2.0, 0.0), (-1.0, -math.sqrt(3.0)), (-1.0, math.sqrt(3.0)))


def kasner_angle(theta: float) -> float:
    """Kasner map on angles in [0, 2*pi); the special points are fixed exactly."""
    for t in SPECIAL_POINTS:
        if theta == t:
            return t
    return kernels.kasner_angle(float(theta))


def kasner_derivative(theta: float) -> float:
    return kernels.kasner_derivative(float(theta))


def arc_index(theta: float) -> int:
    """1, 2 or 3: the arc whose interior (or lower boundary) holds ``theta``."""
    t = theta % TWO_PI
    if T1 <= t < T3:
        return 3
    if T3 <= t < T2:
        return 2
    return 1


def kasner_geometric(theta: float) -> float:
    """Second intersection of the chord through the arc's projection point."""
    for t in SPECIAL_POINTS:
        if CIRCLE.distance(theta, t) <= 1e-12:
            raise AtSpecialPoint(f"theta={theta!r} is a special point; the chord degenerates to a tangent")
    px, py = PROJECTION_POINTS[arc_index(theta) - 1]
    x, y = math.cos(theta), math.sin(theta)
    dx, dy = x - px, y - py
    # |X + s d|^2 = 1 has roots s = 0 and the one below
    s = -2.0 * (x * dx + y * dy) / (dx * dx + dy * dy)
    return math.atan2(y + s * dy, x + s * dx) % TWO_PI


@dataclass(frozen=True)
class KasnerBranch(Branch):
    """The map on [k*pi/3, (k+1)*pi/3], one sixth of the circle."""

    index: int

    @property
    def support(self):
        return Arc(self.index * THIRD, THIRD)

    @property
    def _shift(self):
        # rotation count and orientation of the symmetry carrying [0, pi/3] here
        return (self.index + 1) // 2 * (2.0 * math.pi / 3.0), 1.0 if self.index % 2 == 0 else -1.0

    def _t(self, u):
        c, s = self._shift
        return min(max(s * (u - c), 0.0), THIRD)

    def lift(self, u):
        c, s = self._shift
        return s * kernels.phi0(self._t(u)) + c

    def dlift(self, u):
        return kernels.phi0_deriv(self._t(u))

    def inverse(self, v):
        c, s = self._shift
        t = kernels.phi0_inverse(s * (v - c), XTOL)
        return c + s * t

    def abs_deriv_bounds(self, u0, u1):
        a, b = sorted((self._t(u0), self._t(u1)))
        # |phi0'| decreases on [0, pi/3]
        return -kernels.phi0_deriv(b), -kernels.phi0_deriv(a)


def kasner_system():
    T = PiecewiseMonotoneMap(CIRCLE, tuple(KasnerBranch(k) for k in range(6)), name="kasner")
    P = Partition(CIRCLE, (LAMBDA1, LAMBDA2, LAMBDA3))
    return T, P, A0


def _pair_blocks(horizon):
    """Symbol lists for two sequences that alternately agree and disagree.

    Layout: a shared lead symbol 1, then repeated blocks ``D_k C_k`` where
    ``D_k`` is (3, 1) in one sequence and (2, 1) in the other, and ``C_k`` is
    the shared word (2, 3, 1) repeated 2**k times.
    """
    x, y = [1], [1]
    k = 1
    while len(x) < horizon + 64:
        x += [3, 1]
        y += [2, 1]
        block = [2, 3, 1] * (2 ** k)
        x += block
        y += block
        k += 1
    return x, y


def scrambled_pair(horizon: int = 200):
    """Two admissible sequences under A0 forming a finite Li-Yorke witness."""
    x, y = _pair_blocks(horizon)
    per = (2, 3, 1)
    return SymbolSequence(tuple(x), per), SymbolSequence(tuple(y), per)


def scrambled_pair_witness(horizon: int = 200, tol: float = 1e-9, pair=None):
    """Min and max of d(Phi^n x, Phi^n y), n <= horizon, for the pair's factor points.

    Orbit points are obtained by projecting shifted sequences, never by
    iterating the map forward.
    """
    from .semiconj import orbit_points

    if horizon < 100:
        raise ValueError("horizon must be at least 100")
    T, P, _ = kasner_system()
    s, t = pair if pair is not None else scrambled_pair(horizon)
    xs = orbit_points(T, P, s, horizon, tol)
    ys = orbit_points(T, P, t, horizon, tol)
    if not all(fp.certified for fp in xs + ys):
        raise SlowConvergence("factor points along the pair orbits could not be certified")
    d = np.array([CIRCLE.distance(a.point, b.point) for a, b in zip(xs, ys)])
    return {
        "horizon": horizon,
        "min_distance": float(d.min()),
        "max_distance": float(d.max()),
        "argmin": int(d.argmin()),
        "argmax": int(d.argmax()),
        "distances": d.tolist(),
    }
