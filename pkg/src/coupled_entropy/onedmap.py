"""Piecewise-monotone maps on the interval [0, 1] and the circle [0, 2*pi).

Points on the circle are angles. An :class:`Arc` is a closed arc stored as
``(start, length)``, so arcs through angle 0 need no special casing. Every
branch carries a *lift*: a real-valued monotone function on its support
whose value mod 2*pi is the map. Lifts make images, inverses and preimages
plain real-interval arithmetic.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    AtBreakpoint,
    BadParams,
    InvalidMap,
    InvalidPartition,
    NotInImage,
    NotInSupport,
    OutOfDomain,
    TransitionMatrixError,
    UnknownBuiltin,
)
from .trans_matrix import TransitionMatrix, is_irreducible, spectral_radius, validate_transition

TWO_PI = 2.0 * math.pi
# relative slack when checking branch tiling and continuity
GLUE_TOL = 1e-12
# target spacing of bisection brackets in lifted coordinates
XTOL = 4e-16


@dataclass(frozen=True)
class Domain1D:
    kind: str
    length: float

    def __post_init__(self):
        if self.kind not in ("interval", "circle"):
            raise ValueError(f"unknown domain kind {self.kind!r}")

    @property
    def is_circle(self) -> bool:
        return self.kind == "circle"

    def wrap(self, x: float) -> float:
        if not self.is_circle:
            return x
        y = x % self.length
        return 0.0 if y >= self.length else y

    def distance(self, x: float, y: float) -> float:
        if not self.is_circle:
            return abs(x - y)
        d = abs(x - y) % self.length
        return min(d, self.length - d)

    def whole(self) -> "Arc":
        return Arc(0.0, self.length)


INTERVAL = Domain1D("interval", 1.0)
CIRCLE = Domain1D("circle", TWO_PI)


@dataclass(frozen=True)
class Arc:
    """Closed arc (or interval) ``[start, start + length]``."""

    start: float
    length: float

    @property
    def end(self) -> float:
        return self.start + self.length

    @property
    def midpoint(self) -> float:
        return self.start + 0.5 * self.length


def make_arc(domain: Domain1D, start: float, length: float) -> Arc:
    if length < 0:
        raise ValueError("arc length must be nonnegative")
    if domain.is_circle:
        return Arc(domain.wrap(start), min(length, domain.length))
    return Arc(start, length)


def offset(domain: Domain1D, arc: Arc, x: float) -> float:
    """Position of ``x`` measured from ``arc.start``.

    On the circle the result lies in ``[-g/2, arc.length + g/2)`` where ``g``
    is the length of the complementary gap, so points just outside either
    end get small negative or slightly-too-large offsets instead of wrapping.
    """
    if not domain.is_circle:
        return x - arc.start
    margin = 0.5 * (domain.length - arc.length)
    return ((x - arc.start + margin) % domain.length) - margin


def arc_contains(domain: Domain1D, arc: Arc, x: float, tol: float = 0.0) -> bool:
    off = offset(domain, arc, x)
    return -tol <= off <= arc.length + tol


def lift_overlaps(domain: Domain1D, arc: Arc, lo: float, hi: float):
    """Intersections of ``[lo, hi]`` with every lift of ``arc`` (possibly degenerate)."""
    out = []
    if not domain.is_circle:
        a, b = max(arc.start, lo), min(arc.end, hi)
        if b >= a:
            out.append((a, b))
        return out
    L = domain.length
    k0 = math.floor((lo - arc.end) / L)
    k1 = math.ceil((hi - arc.start) / L)
    for k in range(k0, k1 + 1):
        a0 = arc.start + k * L
        a, b = max(a0, lo), min(a0 + arc.length, hi)
        if b >= a:
            out.append((a, b))
    return out


def arc_union_covers(domain: Domain1D, target: Arc, arcs, tol: float) -> bool:
    """Whether the union of ``arcs`` contains ``target`` up to gaps of size ``tol``."""
    pieces = []
    for arc in arcs:
        if domain.is_circle and arc.length >= domain.length - tol:
            return True
        pieces.extend(lift_overlaps(domain, arc, target.start - tol, target.end + tol))
    pieces.sort()
    reach = target.start
    for a, b in pieces:
        if a > reach + tol:
            return False
        reach = max(reach, b)
    return reach >= target.end - tol


def arc_gap(domain: Domain1D, a: Arc, b: Arc) -> float:
    """Distance between two closed arcs in the domain metric (0 when they meet)."""
    if lift_overlaps(domain, a, b.start, b.end):
        return 0.0
    if not domain.is_circle:
        return max(b.start - a.end, a.start - b.end)
    return min(domain.distance(a.end, b.start), domain.distance(b.end, a.start))


def overlap_length(domain: Domain1D, a: Arc, b: Arc) -> float:
    return sum(hi - lo for lo, hi in lift_overlaps(domain, a, b.start, b.end))


def _bisect_monotone(f, v, lo, hi, increasing, xtol=XTOL):
    """Solve f(u) = v on [lo, hi] for monotone f, assuming v lies in the image."""
    while hi - lo > xtol * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if (f(mid) < v) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class Branch:
    """Monotone C^1 piece of a map, described through its lift on ``support``.

    Lifted coordinates ``u`` run over ``[support.start, support.end]``.
    Subclasses provide ``lift``, ``dlift``, ``inverse`` and
    ``abs_deriv_bounds``.
    """

    support: Arc

    def lift(self, u: float) -> float:
        raise NotImplementedError

    def dlift(self, u: float) -> float:
        raise NotImplementedError

    def inverse(self, v: float) -> float:
        raise NotImplementedError

    def abs_deriv_bounds(self, u0: float, u1: float):
        raise NotImplementedError

    @property
    def increasing(self) -> bool:
        return self.lift(self.support.end) > self.lift(self.support.start)

    @property
    def deriv_bounds(self):
        return self.abs_deriv_bounds(self.support.start, self.support.end)

    def image_range(self, u0=None, u1=None):
        u0 = self.support.start if u0 is None else u0
        u1 = self.support.end if u1 is None else u1
        a, b = self.lift(u0), self.lift(u1)
        return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class LinearBranch(Branch):
    """Affine lift from ``v0`` at ``support.start`` to ``v1`` at ``support.end``."""

    support: Arc
    v0: float
    v1: float

    def __post_init__(self):
        if self.support.length <= 0 or self.v0 == self.v1:
            raise InvalidMap("linear branch must be nondegenerate and strictly monotone")

    @property
    def slope(self) -> float:
        return (self.v1 - self.v0) / self.support.length

    def lift(self, u):
        if u == self.support.start:
            return self.v0
        if u == self.support.end:
            return self.v1
        return self.v0 + self.slope * (u - self.support.start)

    def dlift(self, u):
        return self.slope

    def inverse(self, v):
        if v == self.v0:
            return self.support.start
        if v == self.v1:
            return self.support.end
        u = self.support.start + (v - self.v0) / self.slope
        return min(max(u, self.support.start), self.support.end)

    def abs_deriv_bounds(self, u0, u1):
        s = abs(self.slope)
        return s, s


@dataclass(frozen=True)
class FunctionBranch(Branch):
    """Lift given by arbitrary Python callables; inverse by bisection."""

    support: Arc
    f: Callable[[float], float]
    df: Callable[[float], float]
    samples: int = 257

    def __post_init__(self):
        u = np.linspace(self.support.start, self.support.end, self.samples)
        d = np.array([self.df(x) for x in u])
        if not (np.all(d > 0) or np.all(d < 0)):
            raise InvalidMap("derivative changes sign or vanishes on the branch support")

    def lift(self, u):
        return self.f(u)

    def dlift(self, u):
        return self.df(u)

    def inverse(self, v):
        s = self.support
        return _bisect_monotone(self.f, v, s.start, s.end, self.increasing)

    def abs_deriv_bounds(self, u0, u1):
        d = np.abs([self.df(x) for x in np.linspace(u0, u1, self.samples)])
        return float(d.min()), float(d.max())


@dataclass(frozen=True)
class Partition:
    """Closed pieces with pairwise disjoint interiors."""

    domain: Domain1D
    pieces: tuple

    def __post_init__(self):
        pieces = tuple(make_arc(self.domain, a.start, a.length) for a in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not pieces:
            raise InvalidPartition("partition needs at least one piece")
        slack = GLUE_TOL * self.domain.length
        for i, a in enumerate(pieces):
            if a.length <= slack:
                raise InvalidPartition(f"piece {i + 1} has zero length")
            if not self.domain.is_circle and (a.start < -slack or a.end > self.domain.length + slack):
                raise InvalidPartition(f"piece {i + 1} leaves the interval")
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                if overlap_length(self.domain, pieces[i], pieces[j]) > slack:
                    raise InvalidPartition(f"pieces {i + 1} and {j + 1} overlap in their interiors")

    @property
    def p(self) -> int:
        return len(self.pieces)

    def __getitem__(self, i):
        return self.pieces[i]

    def __len__(self):
        return len(self.pieces)

    def endpoints(self):
        pts = []
        for a in self.pieces:
            pts.append(self.domain.wrap(a.start))
            pts.append(self.domain.wrap(a.end))
        return pts

    def containing(self, x: float, tol: float = 0.0):
        """0-based indices of the pieces containing ``x``."""
        return [i for i, a in enumerate(self.pieces) if arc_contains(self.domain, a, x, tol)]

    def to_config(self):
        return [[a.start, a.end] for a in self.pieces]


@dataclass(frozen=True)
class PiecewiseMonotoneMap:
    domain: Domain1D
    branches: tuple
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        self._check_tiling()

    def _check_tiling(self):
        d = self.domain
        L = d.length
        slack = GLUE_TOL * max(1.0, L)
        if not self.branches:
            raise InvalidMap("map needs at least one branch")
        order = sorted(range(len(self.branches)), key=lambda k: d.wrap(self.branches[k].support.start))
        total = sum(b.support.length for b in self.branches)
        if abs(total - L) > slack:
            raise InvalidMap(f"branch supports have total length {total}, domain length is {L}")
        if not d.is_circle:
            first = self.branches[order[0]].support
            if abs(first.start) > slack:
                raise InvalidMap("branches must start at 0")
        pairs = list(zip(order, order[1:]))
        if d.is_circle:
            pairs.append((order[-1], order[0]))
        for a, b in pairs:
            ba, bb = self.branches[a], self.branches[b]
            if d.distance(ba.support.end, bb.support.start) > slack:
                raise InvalidMap(f"branch supports {a} and {b} do not abut")
            va, vb = ba.lift(ba.support.end), bb.lift(bb.support.start)
            gap = d.distance(va, vb) if d.is_circle else abs(va - vb)
            if gap > slack:
                raise InvalidMap(f"map is discontinuous between branches {a} and {b} (jump {gap:.3e})")
        if not d.is_circle:
            for k, b in enumerate(self.branches):
                lo, hi = b.image_range()
                if lo < -slack or hi > L + slack:
                    raise InvalidMap(f"branch {k} maps outside [0, {L}]")

    @property
    def n_branches(self) -> int:
        return len(self.branches)

    def _u(self, b: Branch, x: float) -> float:
        s = b.support
        u = s.start + offset(self.domain, s, x)
        return min(max(u, s.start), s.end)

    def branches_at(self, x: float, tol: float = GLUE_TOL):
        return [k for k, b in enumerate(self.branches) if arc_contains(self.domain, b.support, x, tol)]

    def _check_point(self, x):
        if not math.isfinite(x):
            raise OutOfDomain(f"{x!r} is not a finite point")
        if not self.domain.is_circle and not (-GLUE_TOL <= x <= self.domain.length + GLUE_TOL):
            raise OutOfDomain(f"{x!r} outside [0, {self.domain.length}]")

    def evaluate(self, x: float) -> float:
        self._check_point(x)
        ks = self.branches_at(x)
        if not ks:
            raise OutOfDomain(f"{x!r} not covered by any branch")
        b = self.branches[ks[0]]
        return self.domain.wrap(b.lift(self._u(b, x)))

    def derivative(self, x: float) -> float:
        self._check_point(x)
        ks = self.branches_at(x)
        if not ks:
            raise OutOfDomain(f"{x!r} not covered by any branch")
        if len(ks) == 1:
            b = self.branches[ks[0]]
            return b.dlift(self._u(b, x))
        # x is a breakpoint: the branch ending at x gives the left derivative
        left = right = None
        for k in ks:
            b = self.branches[k]
            u = self._u(b, x)
            if u - b.support.start > b.support.end - u:
                left = b.dlift(u)
            else:
                right = b.dlift(u)
        if left is None or right is None:
            vals = [self.branches[k].dlift(self._u(self.branches[k], x)) for k in ks]
            left, right = vals[0], vals[-1]
        if abs(left - right) <= 1e-9 * max(1.0, abs(left)):
            return 0.5 * (left + right)
        raise AtBreakpoint(x, left, right)

    def branch_image(self, b: int, J: Arc) -> Arc:
        br = self.branches[b]
        u0 = br.support.start + offset(self.domain, br.support, J.start)
        slack = GLUE_TOL * max(1.0, self.domain.length)
        if u0 < br.support.start - slack or u0 + J.length > br.support.end + slack:
            raise NotInSupport(f"{J} is not inside the support of branch {b}")
        u0 = max(u0, br.support.start)
        u1 = min(u0 + J.length, br.support.end)
        lo, hi = br.image_range(u0, u1)
        return make_arc(self.domain, lo, hi - lo)

    def branch_inverse(self, b: int, y: float, tol: float = 1e-12) -> float:
        br = self.branches[b]
        lo, hi = br.image_range()
        v = y
        if self.domain.is_circle:
            L = self.domain.length
            v = y + L * math.ceil((lo - tol - y) / L)
        if not (lo - tol <= v <= hi + tol):
            raise NotInImage(f"{y!r} is not in the image of branch {b}")
        v = min(max(v, lo), hi)
        return self.domain.wrap(br.inverse(v))

    def image_of(self, piece: Arc):
        """Images of ``piece`` under every branch meeting it, as arcs."""
        out = []
        slack = GLUE_TOL * max(1.0, self.domain.length)
        for br in self.branches:
            s = br.support
            for s0, s1 in lift_overlaps(self.domain, piece, s.start, s.end):
                if s1 - s0 <= slack:
                    continue
                lo, hi = br.image_range(s0, s1)
                out.append(make_arc(self.domain, lo, hi - lo))
        return out

    def abs_deriv_bounds_on(self, piece: Arc):
        lo, hi = math.inf, 0.0
        slack = GLUE_TOL * max(1.0, self.domain.length)
        for br in self.branches:
            s = br.support
            for s0, s1 in lift_overlaps(self.domain, piece, s.start, s.end):
                if s1 - s0 <= slack:
                    continue
                a, b = br.abs_deriv_bounds(s0, s1)
                lo, hi = min(lo, a), max(hi, b)
        return lo, hi

    def pull_back(self, piece: Arc, target: Arc, tol: float):
        """Sub-arcs of ``piece`` that the map carries into ``target``.

        Only pieces whose image overlap exceeds ``tol`` are kept, so the
        result describes the closure of the interior of the preimage.
        """
        out = []
        slack = GLUE_TOL * max(1.0, self.domain.length)
        for br in self.branches:
            s = br.support
            for s0, s1 in lift_overlaps(self.domain, piece, s.start, s.end):
                if s1 - s0 <= slack:
                    continue
                lo, hi = br.image_range(s0, s1)
                for c0, c1 in lift_overlaps(self.domain, target, lo, hi):
                    if c1 - c0 <= tol:
                        continue
                    ua, ub = sorted((br.inverse(c0), br.inverse(c1)))
                    ua, ub = max(ua, s0), min(ub, s1)
                    if ub > ua:
                        out.append(make_arc(self.domain, ua, ub - ua))
        return out


def piecewise_linear(kind: str, breakpoints, values, name: str = "piecewise_linear") -> PiecewiseMonotoneMap:
    """Continuous piecewise-linear map through ``(breakpoints[k], values[k])``.

    On the circle, breakpoints must span exactly one turn and ``values`` are
    lifted angles whose last-minus-first difference is a multiple of 2*pi.
    """
    domain = CIRCLE if kind == "circle" else INTERVAL if kind == "interval" else None
    if domain is None:
        raise BadParams(f"unknown domain kind {kind!r}")
    bp = [float(b) for b in breakpoints]
    vals = [float(v) for v in values]
    if len(bp) != len(vals) or len(bp) < 2:
        raise BadParams("breakpoints and values must have equal length >= 2")
    if any(b1 <= b0 for b0, b1 in zip(bp, bp[1:])):
        raise BadParams("breakpoints must be strictly increasing")
    branches = []
    for k in range(len(bp) - 1):
        try:
            branches.append(LinearBranch(Arc(bp[k], bp[k + 1] - bp[k]), vals[k], vals[k + 1]))
        except InvalidMap as exc:
            raise BadParams(f"segment {k}: {exc}") from exc
    if domain.is_circle:
        branches = [LinearBranch(make_arc(domain, b.support.start, b.support.length), b.v0, b.v1) for b in branches]
    try:
        return PiecewiseMonotoneMap(domain, tuple(branches), name=name)
    except InvalidMap as exc:
        raise BadParams(str(exc)) from exc


def _doubling():
    branches = (LinearBranch(Arc(0.0, math.pi), 0.0, TWO_PI), LinearBranch(Arc(math.pi, math.pi), TWO_PI, 2 * TWO_PI))
    T = PiecewiseMonotoneMap(CIRCLE, branches, name="doubling")
    P = Partition(CIRCLE, (Arc(0.0, math.pi), Arc(math.pi, math.pi)))
    return T, P, validate_transition([[1, 1], [1, 1]])


def _tent():
    branches = (LinearBranch(Arc(0.0, 0.5), 0.0, 1.0), LinearBranch(Arc(0.5, 0.5), 1.0, 0.0))
    T = PiecewiseMonotoneMap(INTERVAL, branches, name="tent")
    P = Partition(INTERVAL, (Arc(0.0, 0.5), Arc(0.5, 0.5)))
    return T, P, validate_transition([[1, 1], [1, 1]])


def linear_markov(matrix) -> tuple:
    """Continuous piecewise-linear interval map realizing ``matrix``.

    Piece lengths follow the Perron eigenvector, so every branch has slope of
    modulus close to the Perron root and piece i maps exactly onto the union
    of the pieces j with a_ij = 1. Each row's ones must be contiguous, and
    branch orientations must be choosable so the map is continuous.
    """
    try:
        A = matrix if isinstance(matrix, TransitionMatrix) else validate_transition(matrix)
    except TransitionMatrixError as exc:
        raise BadParams(f"linear_markov: {exc}") from exc
    if not is_irreducible(A):
        raise BadParams("linear_markov needs an irreducible matrix")
    p = A.p
    targets = []
    for i, row in enumerate(A.entries):
        ones = [j for j, a in enumerate(row) if a]
        if ones != list(range(ones[0], ones[-1] + 1)):
            raise BadParams(f"row {i + 1} has non-contiguous ones; no continuous interval map realizes it")
        targets.append((ones[0], ones[-1] + 1))
    v = spectral_radius(A, 1e-14).eigvec
    cuts = np.concatenate([[0.0], np.cumsum(v / v.sum())])
    cuts[-1] = 1.0
    cuts = [float(c) for c in cuts]

    def orient(first_increasing):
        out = []
        end = None
        for i, (lo, hi) in enumerate(targets):
            if i == 0:
                inc = first_increasing
            elif end == lo:
                inc = True
            elif end == hi:
                inc = False
            else:
                return None
            out.append(inc)
            end = hi if inc else lo
        return out

    orientation = orient(True) or orient(False)
    if orientation is None:
        raise BadParams("no choice of branch orientations makes this Markov map continuous")
    branches = []
    for i, ((lo, hi), inc) in enumerate(zip(targets, orientation)):
        v0, v1 = (cuts[lo], cuts[hi]) if inc else (cuts[hi], cuts[lo])
        branches.append(LinearBranch(Arc(cuts[i], cuts[i + 1] - cuts[i]), v0, v1))
    T = PiecewiseMonotoneMap(INTERVAL, tuple(branches), name="linear_markov")
    P = Partition(INTERVAL, tuple(Arc(cuts[i], cuts[i + 1] - cuts[i]) for i in range(p)))
    return T, P, A


BUILTINS = ("kasner", "doubling", "tent", "linear_markov")


def make_builtin(name: str, params: Optional[dict] = None):
    """Return ``(map, canonical partition, transition matrix)`` for a named map."""
    params = dict(params or {})
    if name not in BUILTINS:
        raise UnknownBuiltin(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
    if name == "linear_markov":
        if set(params) != {"matrix"}:
            raise BadParams("linear_markov takes exactly one parameter: matrix")
        return linear_markov(params["matrix"])
    if params:
        raise BadParams(f"builtin {name!r} takes no parameters, got {sorted(params)}")
    if name == "doubling":
        return _doubling()
    if name == "tent":
        return _tent()
    from .kasner import kasner_system

    return kasner_system()
