"""Cylinders, the factor map from the subshift, itineraries and cylinder counts.

A cylinder of the word (a_0, ..., a_N) is the set of points of piece a_0
whose k-th iterate lies in piece a_k. It is built backward: start from the
last piece and repeatedly pull back through the branches covering the
previous piece. Cylinders with empty interior count as empty, so pieces
that only share endpoints never create spurious words.
"""
import csv
import math
from dataclasses import dataclass
from typing import Optional

from .errors import AmbiguousBranch, EmptyCylinder, EnumerationCapExceeded
from .onedmap import Arc, Partition, PiecewiseMonotoneMap, make_arc, offset
from .subshift import SymbolSequence, is_admissible, shift
from .trans_matrix import TransitionMatrix

DEFAULT_CAP = 10**6
# overlaps shorter than this fraction of a point enclosure are boundary noise
_PB_REL = 1e-6


@dataclass(frozen=True)
class CylinderInterval:
    word: tuple
    interval: Arc
    diameter: float
    ambiguous: bool = False


@dataclass(frozen=True)
class SingletonEvidence:
    depth: int
    max_diameter: float
    diameter_table: tuple
    decreasing: bool
    argmax_word: tuple = ()
    empty_words: int = 0

    def to_dict(self):
        return {
            "depth": self.depth,
            "max_diameter": self.max_diameter,
            "diameter_table": [list(r) for r in self.diameter_table],
            "decreasing": self.decreasing,
            "argmax_word": list(self.argmax_word),
            "empty_words": self.empty_words,
        }


@dataclass(frozen=True)
class FactorPoint:
    point: float
    radius: float
    certified: bool


def _merge(T: PiecewiseMonotoneMap, piece: Arc, arcs):
    """Enclosing arc of the candidate sub-arcs of ``piece``, and whether there were several."""
    d = T.domain
    offs = [offset(d, piece, a.start) for a in arcs]
    lo = min(offs)
    hi = max(o + a.length for o, a in zip(offs, arcs))
    return make_arc(d, piece.start + lo, hi - lo), len(arcs) > 1


def pull_back(T: PiecewiseMonotoneMap, piece: Arc, target: Arc, tol: float):
    """``piece`` intersected with the preimage of ``target``.

    Returns ``(arc, ambiguous)``; ``arc`` is None when the interior is empty.
    When several branch pieces qualify, their enclosing arc is returned with
    ``ambiguous`` set, even if the pieces happen to touch.
    """
    cands = T.pull_back(piece, target, tol)
    if not cands:
        return None, False
    return _merge(T, piece, cands)


def cylinder(T: PiecewiseMonotoneMap, P: Partition, word, tol: float = 1e-9, on_ambiguous: str = "flag") -> CylinderInterval:
    word = tuple(int(a) for a in word)
    if not word:
        raise ValueError("word must be nonempty")
    cur = P[word[-1] - 1]
    amb = False
    for a in reversed(word[:-1]):
        cur, flag = pull_back(T, P[a - 1], cur, tol)
        if cur is None:
            raise EmptyCylinder(f"cylinder of {word} has empty interior")
        if flag and on_ambiguous == "raise":
            raise AmbiguousBranch(f"several branches carry piece {a} over the target while building {word}")
        amb = amb or flag
    return CylinderInterval(word, cur, cur.length, amb)


def enumerate_cylinders(T: PiecewiseMonotoneMap, P: Partition, depth: int, A: Optional[TransitionMatrix] = None, tol: float = 1e-9, cap: int = DEFAULT_CAP):
    """Nonempty cylinders of lengths 1..depth, level by level, in lexicographic order.

    With ``A`` only admissible words are extended (and empty admissible
    cylinders are counted); without it every symbol is tried.
    Returns ``(levels, empty_admissible)`` where ``levels[n-1]`` lists the
    length-n cylinders.
    """
    p = P.p
    level = [CylinderInterval((i + 1,), P[i], P[i].length) for i in range(p)]
    levels = [level]
    total = len(level)
    empty = 0
    for _ in range(1, depth):
        nxt = []
        for a in range(1, p + 1):
            for c in level:
                if A is not None and A[a - 1, c.word[0] - 1] != 1:
                    continue
                arc, amb = pull_back(T, P[a - 1], c.interval, tol)
                if arc is None:
                    if A is not None:
                        empty += 1
                    continue
                nxt.append(CylinderInterval((a,) + c.word, arc, arc.length, amb or c.ambiguous))
                total += 1
                if total > cap:
                    raise EnumerationCapExceeded(f"more than {cap} cylinders")
        # prepending the leading symbol keeps the outer loop lexicographic
        level = nxt
        levels.append(level)
    return levels, empty


def singleton_check(T, P, A, depth: int, tol: float = 1e-9, cap: int = DEFAULT_CAP) -> SingletonEvidence:
    """Finite-depth evidence that admissible cylinders shrink to points."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    levels, empty = enumerate_cylinders(T, P, depth, A, tol, cap)
    table = []
    worst = ()
    for n, level in enumerate(levels, start=1):
        if not level:
            table.append((n, 0.0))
            continue
        c = max(level, key=lambda c: c.diameter)
        table.append((n, c.diameter))
        worst = c.word
    diam = [d for _, d in table]
    decreasing = all(b < a for a, b in zip(diam, diam[1:])) and diam[-1] > 0
    return SingletonEvidence(depth, diam[-1], tuple(table), decreasing, worst, empty)


def cylinder_counts(T, P, n_max: int, tol: float = 1e-9, cap: int = DEFAULT_CAP):
    levels, _ = enumerate_cylinders(T, P, n_max, None, tol, cap)
    return [(n, len(level)) for n, level in enumerate(levels, start=1)]


def entropy_by_cylinders(T, P, n_max: int, tol: float = 1e-9, cap: int = DEFAULT_CAP):
    """``(n, log(N_n) / n)`` with N_n the number of nonempty depth-n cylinders."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    return [(n, math.log(c) / n) for n, c in cylinder_counts(T, P, n_max, tol, cap)]


def _periodic_point(T, P, per, tol):
    """Point of the periodic sequence per.per.per..., with an enclosing half-width.

    Solves T^q(x) = x on the cylinder of ``per + per[:1]``, which T^q maps
    monotonically onto the piece of ``per[0]``.
    """
    d = T.domain
    q = len(per)
    c1 = cylinder(T, P, per + per[:1], tol).interval
    c0 = P[per[0] - 1]

    def h(u):
        x = d.wrap(u)
        y = x
        for _ in range(q):
            y = T.evaluate(y)
        return offset(d, c0, y) - offset(d, c0, x)

    lo, hi = c1.start, c1.end
    f_lo, f_hi = h(lo), h(hi)
    exact = _resolution(d)
    if abs(f_lo) <= exact:
        return d.wrap(lo), 0.0, True
    if abs(f_hi) <= exact:
        return d.wrap(hi), 0.0, True
    if (f_lo > 0) == (f_hi > 0):
        return d.wrap(c1.midpoint), 0.5 * c1.length, False
    xtol = 0.25 * tol
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = h(mid)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return d.wrap(0.5 * (lo + hi)), 0.5 * (hi - lo), True


def _periodic_enclosure(T, P, per, tol):
    """Small arc around the periodic point, clipped to its cylinder."""
    d = T.domain
    y, r, ok = _periodic_point(T, P, per, tol)
    c1 = cylinder(T, P, per + per[:1], tol).interval
    r = max(r, 1e-3 * tol)
    off = offset(d, c1, y)
    lo, hi = max(off - r, 0.0), min(off + r, c1.length)
    if hi <= lo:
        lo, hi = max(0.0, min(off, c1.length) - r), min(c1.length, max(off, 0.0) + r)
    return make_arc(d, c1.start + lo, hi - lo), ok


def _resolution(d):
    return 64 * 2.220446049250313e-16 * max(1.0, d.length)


def _widen(d, arc, floor):
    """Grow ``arc`` symmetrically to length ``floor``; long backward passes shrink it below float spacing."""
    if arc.length >= floor:
        return arc
    return make_arc(d, arc.midpoint - 0.5 * floor, floor)


def _pull_point(T, piece, enc):
    enc = _widen(T.domain, enc, _resolution(T.domain))
    return pull_back(T, piece, enc, _PB_REL * enc.length)


def orbit_points(T, P, s: SymbolSequence, n: int, tol: float = 1e-9):
    """Factor points of s, shift(s), ..., shift^n(s) from one backward pass."""
    tail = s
    word = []
    for _ in range(n):
        word.append(tail.symbol(0))
        tail = shift(tail)
    enc, ok = _periodic_enclosure(T, P, tail.per, tol)
    ok = ok and enc.length <= 2 * tol
    amb = False
    for a in reversed(tail.pre):
        enc, flag = _pull_point(T, P[a - 1], enc)
        if enc is None:
            raise EmptyCylinder(f"sequence {tail} has an empty cylinder")
        amb = amb or flag
    encs = [enc]
    for a in reversed(word):
        enc, flag = _pull_point(T, P[a - 1], enc)
        if enc is None:
            raise EmptyCylinder(f"sequence {s} has an empty cylinder")
        amb = amb or flag
        encs.append(enc)
    encs.reverse()
    out = []
    for e in encs:
        out.append(FactorPoint(T.domain.wrap(e.midpoint), 0.5 * e.length, ok and not amb and e.length <= 2 * tol))
    return out


def factor_point(T, P, s: SymbolSequence, tol: float = 1e-9) -> FactorPoint:
    """The point whose itinerary is ``s``, with a certified enclosure radius.

    The periodic tail is located by solving T^q(x) = x inside its cylinder;
    the preperiod is then undone by pulling the enclosure back piece by
    piece. ``certified`` is False when the enclosure is wider than ``2*tol``
    or a pull-back was ambiguous.
    """
    return orbit_points(T, P, s, 0, tol)[0]


def _orbit_words(T, P, x, n, A, tol, limit):
    d = T.domain
    out = []

    def walk(y, prefix):
        if len(out) >= limit:
            return
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        nxt = T.evaluate(y) if len(prefix) < n - 1 else None
        for i in P.containing(y, tol):
            a = i + 1
            if prefix and A is not None and A[prefix[-1] - 1, a - 1] != 1:
                continue
            walk(nxt, prefix + [a])

    walk(d.wrap(x), [])
    return out


def itinerary(T, P, x: float, n: int, A: Optional[TransitionMatrix] = None, tol: float = 1e-9, limit: int = 8):
    """Admissible words (a_0..a_{n-1}) with T^k(x) in piece a_k.

    Boundary visits branch into both neighbouring pieces. Words are produced
    in lexicographic order and at most ``limit`` are returned. ``A``
    defaults to the matrix inferred from the map and partition.
    """
    if A is None:
        from .coupled import infer_matrix

        A = infer_matrix(T, P, tol)
    return _orbit_words(T, P, x, n, A, tol, limit)


def preimage_count(T, P, A, y: float, depth: int, tol: float = 1e-9, cap: int = DEFAULT_CAP) -> int:
    """Number of admissible depth-words whose cylinder contains ``y``."""
    words = _orbit_words(T, P, y, depth, A, tol, cap + 1)
    if len(words) > cap:
        raise EnumerationCapExceeded(f"more than {cap} words contain {y}")
    return len(words)


def commuting_defect(T, P, s: SymbolSequence, tol: float = 1e-9) -> float:
    """Distance between T(pi(s)) and pi(shift(s))."""
    pts = orbit_points(T, P, s, 1, tol)
    return T.domain.distance(T.evaluate(pts[0].point), pts[1].point)


def write_series_csv(path, rows, header=("n", "value")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for n, v in rows:
            w.writerow([n, repr(float(v))])
