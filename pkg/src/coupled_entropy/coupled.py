"""Coupled-expansion checks for a (map, partition, matrix) triple and the verdicts they imply.

Tolerances passed here are relative to the domain length.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import DimensionMismatch, NotATransitionMatrix, TransitionMatrixError
from .onedmap import Partition, PiecewiseMonotoneMap, arc_gap, arc_union_covers
from .trans_matrix import TransitionMatrix, is_irreducible, spectral_radius, validate_transition

# rule identifiers as they appear in verdicts and reports
LEMMA_3_2 = "Lemma 3.2"
LEMMA_3_3 = "Lemma 3.3"
THEOREM_3_1 = "Theorem 3.1"
THEOREM_4_3 = "Theorem 4.3"
THEOREM_4_4 = "Theorem 4.4"
PROPOSITION_4_2 = "Proposition 4.2"
NONNEGATIVITY = "nonnegativity"

CLOSURE_NOTE = "closure-of-interior hypotheses taken as satisfied: closed nondegenerate pieces with disjoint interiors cover the domain"


@dataclass(frozen=True)
class VerificationReport:
    covering: bool
    equality: bool
    strict: bool
    min_gap: float
    partition_covering: bool
    boundary_invariant: bool
    expansion_factor: Optional[float]
    min_abs_derivative: float
    domain: str
    singleton_evidence: object = None
    tolerances: dict = field(default_factory=dict)
    notes: tuple = ()

    def with_singleton(self, evidence) -> "VerificationReport":
        return VerificationReport(
            self.covering,
            self.equality,
            self.strict,
            self.min_gap,
            self.partition_covering,
            self.boundary_invariant,
            self.expansion_factor,
            self.min_abs_derivative,
            self.domain,
            evidence,
            dict(self.tolerances),
            self.notes,
        )

    def to_dict(self):
        ev = self.singleton_evidence
        return {
            "covering": self.covering,
            "equality": self.equality,
            "strict": self.strict,
            "min_gap": self.min_gap,
            "partition_covering": self.partition_covering,
            "boundary_invariant": self.boundary_invariant,
            "expansion_factor": self.expansion_factor,
            "min_abs_derivative": self.min_abs_derivative,
            "domain": self.domain,
            "singleton_evidence": None if ev is None else ev.to_dict(),
            "tolerances": dict(self.tolerances),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class EntropyVerdict:
    lower: Optional[float]
    exact: Optional[float]
    li_yorke: bool
    devaney: bool
    justifications: tuple

    def to_dict(self):
        return {
            "lower": self.lower,
            "exact": self.exact,
            "li_yorke": self.li_yorke,
            "devaney": self.devaney,
            "justifications": list(self.justifications),
        }


def _abs_tol(T, tol):
    if not tol > 0:
        raise ValueError("tol must be positive")
    return tol * T.domain.length


def infer_matrix(T: PiecewiseMonotoneMap, P: Partition, tol: float = 1e-9) -> TransitionMatrix:
    """a_ij = 1 exactly when the image of piece i covers all of piece j."""
    eps = _abs_tol(T, tol)
    rows = []
    for piece in P.pieces:
        images = T.image_of(piece)
        rows.append([int(arc_union_covers(T.domain, target, images, eps)) for target in P.pieces])
    try:
        return validate_transition(rows)
    except TransitionMatrixError as exc:
        raise NotATransitionMatrix(f"map and partition give no transition matrix: {exc}") from exc


def verify(T: PiecewiseMonotoneMap, P: Partition, A: TransitionMatrix, tol: float = 1e-9) -> VerificationReport:
    """Check each coupled-expansion hypothesis independently."""
    if A.p != P.p:
        raise DimensionMismatch(f"{P.p} pieces but a {A.p}x{A.p} matrix")
    d = T.domain
    eps = _abs_tol(T, tol)
    covering = equality = True
    for i, piece in enumerate(P.pieces):
        images = T.image_of(piece)
        allowed = [P[j] for j in range(A.p) if A[i, j] == 1]
        for target in allowed:
            if not arc_union_covers(d, target, images, eps):
                covering = False
        for img in images:
            if not arc_union_covers(d, img, allowed, eps):
                equality = False
    equality = equality and covering

    gaps = [arc_gap(d, P[i], P[j]) for i in range(P.p) for j in range(i + 1, P.p)]
    min_gap = min(gaps) if gaps else math.inf
    strict = min_gap > eps

    total = sum(a.length for a in P.pieces)
    partition_covering = abs(total - d.length) <= eps

    ends = P.endpoints()
    boundary_invariant = all(min(d.distance(T.evaluate(e), f) for f in ends) <= eps for e in ends)

    r = min(T.abs_deriv_bounds_on(a)[0] for a in P.pieces)
    # a neutral point evaluates to 1 + O(eps); only a margin above tol counts as expansion
    expanding = r > 1.0 + tol
    notes = (CLOSURE_NOTE,) if partition_covering and equality else ()
    return VerificationReport(
        covering=covering,
        equality=equality,
        strict=strict,
        min_gap=float(min_gap),
        partition_covering=partition_covering,
        boundary_invariant=boundary_invariant,
        expansion_factor=float(r) if expanding else None,
        min_abs_derivative=float(r),
        domain=d.kind,
        tolerances={"relative": tol, "absolute": eps},
        notes=notes,
    )


def word_count_constant(A: TransitionMatrix, tol: float = 1e-12) -> Optional[float]:
    """c with count_words(A, n) <= c * lambda**n for all n, from the Perron vector.

    Only available for irreducible A, where the Perron vector is positive.
    """
    if not is_irreducible(A):
        return None
    res = spectral_radius(A, tol)
    v = res.eigvec
    return float(v.sum() / (res.lam * v.min()))


def entropy_verdict(A: TransitionMatrix, rep: VerificationReport, singleton=None, tol: float = 1e-9) -> EntropyVerdict:
    """Apply the entropy and chaos rules whose hypotheses the report confirms."""
    if singleton is None:
        singleton = rep.singleton_evidence
    log_lam = max(0.0, math.log(spectral_radius(A).lam))
    irreducible = is_irreducible(A)
    branching = A.max_row_sum >= 2
    lower = exact = None
    li_yorke = devaney = False
    rules = []

    if rep.strict and rep.covering:
        lower = log_lam
        rules.append(LEMMA_3_2 if A.is_full() else LEMMA_3_3)
        if irreducible and branching:
            li_yorke = True
            lower = max(lower, math.log(2.0) / A.p)
            rules.append(THEOREM_3_1)

    by_cylinders = bool(rep.partition_covering and rep.equality and singleton is not None and singleton.decreasing)
    if by_cylinders:
        exact = log_lam
        rules.append(THEOREM_4_3)
    by_expansion = bool(
        rep.domain == "circle"
        and rep.partition_covering
        and rep.covering
        and rep.expansion_factor is not None
        and rep.expansion_factor > 1.0
        and rep.boundary_invariant
    )
    if by_expansion:
        exact = log_lam
        rules.append(THEOREM_4_4)
    if rep.domain == "circle" and (by_cylinders or by_expansion) and irreducible and branching:
        li_yorke = devaney = True
        rules.append(PROPOSITION_4_2)

    if exact is not None:
        lower = exact if lower is None else min(lower, exact + tol)
    if lower is None:
        lower = 0.0
        rules.append(NONNEGATIVITY)
    return EntropyVerdict(lower, exact, li_yorke, devaney, tuple(rules))
