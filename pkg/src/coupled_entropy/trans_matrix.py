"""Zero/one transition matrices and their maximal (Perron) eigenvalue."""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import DimensionTooSmall, NoConvergence, NonBinaryEntry, ZeroColumn, ZeroRow


@dataclass(frozen=True)
class TransitionMatrix:
    """A validated p x p zero/one matrix with no zero row or column.

    Build instances through :func:`validate_transition`.
    """

    entries: tuple

    @property
    def p(self) -> int:
        return len(self.entries)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row_sums(self):
        return [sum(r) for r in self.entries]

    def col_sums(self):
        return [sum(c) for c in zip(*self.entries)]

    @property
    def max_row_sum(self) -> int:
        return max(self.row_sums())

    def is_full(self) -> bool:
        return all(all(r) for r in self.entries)

    def dominated_by(self, other: "TransitionMatrix") -> bool:
        """Entrywise ``self <= other``."""
        return all(a <= b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))

    def tolist(self):
        return [list(r) for r in self.entries]


def validate_transition(entries) -> TransitionMatrix:
    rows = [list(r) for r in entries]
    p = len(rows)
    if any(len(r) != p for r in rows):
        raise NonBinaryEntry(f"matrix is not square: row lengths {[len(r) for r in rows]}")
    if p < 2:
        raise DimensionTooSmall(f"transition matrices need p >= 2, got p={p}")
    clean = []
    for i, r in enumerate(rows):
        out = []
        for j, a in enumerate(r):
            if isinstance(a, bool) or a not in (0, 1):
                raise NonBinaryEntry(f"entry ({i + 1},{j + 1}) = {a!r} is not 0 or 1")
            out.append(int(a))
        clean.append(tuple(out))
    for i, r in enumerate(clean):
        if sum(r) == 0:
            raise ZeroRow(f"row {i + 1} sums to 0")
    for j in range(p):
        if sum(r[j] for r in clean) == 0:
            raise ZeroColumn(f"column {j + 1} sums to 0")
    return TransitionMatrix(tuple(clean))


@dataclass(frozen=True)
class SpectralResult:
    lam: float
    eigvec: Optional[np.ndarray]
    iterations: int
    residual: float

    @property
    def log_lambda(self) -> float:
        return math.log(self.lam)


def _iteration_cap(p, tol):
    return 10 * p * math.ceil(1.0 / tol)


def spectral_radius(A: TransitionMatrix, tol: float = 1e-12) -> SpectralResult:
    """Maximal eigenvalue of ``A`` to absolute error ``tol``.

    Each strongly connected component is handled separately and the largest
    Perron root wins. A Perron vector (max-norm 1) is returned only when
    ``A`` is irreducible.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    from .digraph import graph_of, strongly_connected_components

    a = A.array().astype(np.float64)
    comps = strongly_connected_components(graph_of(A))
    best = 0.0
    iterations = 0
    residual = 0.0
    vec = None
    for comp in comps:
        idx = sorted(v - 1 for v in comp)
        sub = a[np.ix_(idx, idx)]
        if len(idx) == 1:
            lam = float(sub[0, 0])
            best = max(best, lam)
            continue
        cap = _iteration_cap(len(idx), tol)
        lo, hi, v, it = kernels.power_iterate(sub, tol, cap)
        iterations += int(it)
        if hi - lo > tol:
            raise NoConvergence(f"power iteration hit the cap of {cap} steps with bracket width {hi - lo:.3e}")
        lam = 0.5 * (lo + hi)
        best = max(best, lam)
        v = np.asarray(v, dtype=np.float64)
        v = v / v.max()
        res = float(np.max(np.abs(sub @ v - lam * v)))
        residual = max(residual, res)
        if len(comps) == 1:
            vec = v
    return SpectralResult(best, vec, iterations, residual)


def _bool_power_positive(a, k):
    m = a.copy()
    for _ in range(k - 1):
        m = ((m @ a) > 0).astype(np.int64)
    return m


def is_irreducible(A: TransitionMatrix) -> bool:
    """Every (i, j) has some positive power entry; tested via (I + A)^(p-1) > 0."""
    a = A.array()
    p = A.p
    m = ((np.eye(p, dtype=np.int64) + a) > 0).astype(np.int64)
    reach = m.copy()
    for _ in range(p - 2):
        reach = ((reach @ m) > 0).astype(np.int64)
    # the identity term hides the diagonal; a closed walk i -> i must exist too
    if not reach.all():
        return False
    return bool(((reach @ a) > 0).all())


def is_primitive(A: TransitionMatrix):
    """Return ``(True, k)`` with the smallest k such that A^k > 0, else ``(False, None)``.

    The search stops at the Wielandt bound (p-1)^2 + 1.
    """
    a = A.array()
    bound = (A.p - 1) ** 2 + 1
    m = a.copy()
    for k in range(1, bound + 1):
        if (m > 0).all():
            return True, k
        m = ((m @ a) > 0).astype(np.int64)
    return False, None


def matrix_norm(m) -> int:
    """Sum of absolute entries."""
    return int(np.abs(np.asarray(m, dtype=object)).sum())


def growth_rate(A: TransitionMatrix, n: int) -> float:
    """``(1/n) log ||A^n||`` with ``||.||`` the entry sum.

    Exact integers up to n = 50, then floating accumulation with
    renormalization.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n <= 50:
        from .digraph import matrix_power_exact

        total = sum(sum(r) for r in matrix_power_exact(A, n))
        return math.log(total) / n if total > 0 else -math.inf
    a = A.array().astype(np.float64)
    m = a.copy()
    log_scale = 0.0
    for _ in range(n - 1):
        m = m @ a
        s = m.sum()
        if s == 0:
            return -math.inf
        m /= s
        log_scale += math.log(s)
    return (log_scale + math.log(m.sum())) / n
