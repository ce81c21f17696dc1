"""The directed graph of a transition matrix: components, full cycles, path counts."""
from dataclasses import dataclass
from collections import deque

from .trans_matrix import TransitionMatrix


@dataclass(frozen=True)
class TransitionGraph:
    """Vertices 1..p with an edge i -> j exactly when a_ij = 1."""

    p: int
    edges: frozenset

    def successors(self, i):
        return sorted(j for (a, j) in self.edges if a == i)


def graph_of(A: TransitionMatrix) -> TransitionGraph:
    edges = frozenset((i + 1, j + 1) for i, row in enumerate(A.entries) for j, a in enumerate(row) if a)
    return TransitionGraph(A.p, edges)


def strongly_connected_components(G: TransitionGraph):
    """Tarjan's algorithm, iterative; components in topological order of the condensation."""
    succ = {v: G.successors(v) for v in range(1, G.p + 1)}
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = 0
    for root in range(1, G.p + 1):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, k = work.pop()
            if k == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            nbrs = succ[v]
            if k < len(nbrs):
                work.append((v, k + 1))
                w = nbrs[k]
                if w not in index:
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(frozenset(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    # Tarjan emits sinks first
    out.reverse()
    return out


def _bfs_path(G, src, dst):
    """Shortest walk src -> dst with at least one edge, as a vertex list, or None."""
    prev = {}
    queue = deque()
    for w in G.successors(src):
        if w not in prev:
            prev[w] = src
            queue.append(w)
    while queue:
        v = queue.popleft()
        if v == dst:
            path = [v]
            while True:
                u = prev[path[-1]]
                path.append(u)
                if u == src and len(path) > 1:
                    break
            return path[::-1]
        for w in G.successors(v):
            if w not in prev:
                prev[w] = v
                queue.append(w)
    return None


def full_cycle(G: TransitionGraph):
    """A closed walk through every vertex (repetition allowed), or None.

    The walk is returned as a vertex tuple starting and ending at vertex 1.
    """
    order = list(range(1, G.p + 1)) + [1]
    walk = [1]
    for a, b in zip(order, order[1:]):
        leg = _bfs_path(G, a, b)
        if leg is None:
            return None
        walk.extend(leg[1:])
    return tuple(walk)


def has_full_cycle(G: TransitionGraph) -> bool:
    return full_cycle(G) is not None


def _matmul(x, y):
    n = len(x)
    return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def matrix_power_exact(A: TransitionMatrix, n: int):
    """A^n as nested lists of Python ints."""
    if n < 0:
        raise ValueError("n must be >= 0")
    p = A.p
    result = [[int(i == j) for j in range(p)] for i in range(p)]
    base = [list(r) for r in A.entries]
    while n:
        if n & 1:
            result = _matmul(result, base)
        n >>= 1
        if n:
            base = _matmul(base, base)
    return result


def count_paths(A: TransitionMatrix, i: int, j: int, n: int) -> int:
    """Number of length-n paths i -> j in the graph, i.e. (A^n)_ij (1-based vertices)."""
    if not (1 <= i <= A.p and 1 <= j <= A.p):
        raise ValueError(f"vertices must lie in 1..{A.p}")
    if n < 1:
        raise ValueError("n must be >= 1")
    return matrix_power_exact(A, n)[i - 1][j - 1]
