"""One-sided subshifts of finite type over symbols 1..p."""
import math
from dataclasses import dataclass
from math import lcm

from .digraph import matrix_power_exact
from .errors import SymbolOutOfRange
from .trans_matrix import TransitionMatrix, spectral_radius


@dataclass(frozen=True)
class SymbolSequence:
    """The eventually periodic sequence ``pre . per . per . ...``."""

    pre: tuple = ()
    per: tuple = (1,)

    def __post_init__(self):
        object.__setattr__(self, "pre", tuple(int(a) for a in self.pre))
        object.__setattr__(self, "per", tuple(int(a) for a in self.per))
        if not self.per:
            raise ValueError("period must be nonempty")

    def symbol(self, k: int) -> int:
        if k < len(self.pre):
            return self.pre[k]
        return self.per[(k - len(self.pre)) % len(self.per)]

    def prefix(self, n: int) -> tuple:
        return tuple(self.symbol(k) for k in range(n))

    def to_config(self):
        return {"pre": list(self.pre), "per": list(self.per)}

    @classmethod
    def from_config(cls, obj):
        return cls(tuple(obj.get("pre", ())), tuple(obj["per"]))


def _check_symbols(A, symbols):
    for a in symbols:
        if not 1 <= a <= A.p:
            raise SymbolOutOfRange(f"symbol {a} outside 1..{A.p}")


def is_admissible(A: TransitionMatrix, w) -> bool:
    """Every adjacent pair is an allowed transition (wrap and seam included for sequences)."""
    if isinstance(w, SymbolSequence):
        _check_symbols(A, w.pre + w.per)
        chain = w.pre + w.per + (w.per[0],)
    else:
        chain = tuple(w)
        _check_symbols(A, chain)
    return all(A[a - 1, b - 1] == 1 for a, b in zip(chain, chain[1:]))


def count_words(A: TransitionMatrix, n: int) -> int:
    """Number of admissible words of length n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return A.p
    return sum(sum(r) for r in matrix_power_exact(A, n - 1))


def subshift_entropy(A: TransitionMatrix, tol: float = 1e-12) -> float:
    return math.log(spectral_radius(A, tol).lam)


def shift(s: SymbolSequence) -> SymbolSequence:
    if s.pre:
        return SymbolSequence(s.pre[1:], s.per)
    return SymbolSequence((), s.per[1:] + s.per[:1])


def first_disagreement(a: SymbolSequence, b: SymbolSequence):
    """Index of the first differing symbol, or None when the sequences coincide."""
    horizon = max(len(a.pre), len(b.pre)) + lcm(len(a.per), len(b.per))
    for k in range(horizon):
        if a.symbol(k) != b.symbol(k):
            return k
    return None


def sequence_metric(a: SymbolSequence, b: SymbolSequence) -> float:
    k = first_disagreement(a, b)
    return 0.0 if k is None else 2.0 ** (-k)
