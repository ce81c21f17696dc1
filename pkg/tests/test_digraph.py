import numpy as np

from coupled_entropy.digraph import (
    count_paths,
    full_cycle,
    graph_of,
    has_full_cycle,
    matrix_power_exact,
    strongly_connected_components,
)
from coupled_entropy.trans_matrix import is_irreducible, validate_transition

from conftest import random_transition
from oracles import nx_components

A0 = validate_transition([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
CYCLE3 = validate_transition([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
ID2 = validate_transition([[1, 0], [0, 1]])


def test_graph_edges_match_entries():
    g = graph_of(A0)
    assert g.edges == {(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)}
    assert g.successors(1) == [2, 3]


def test_scc_examples():
    assert strongly_connected_components(graph_of(A0)) == [frozenset({1, 2, 3})]
    assert set(strongly_connected_components(graph_of(ID2))) == {frozenset({1}), frozenset({2})}
    assert strongly_connected_components(graph_of(validate_transition([[1, 1], [0, 1]]))) == [
        frozenset({1}),
        frozenset({2}),
    ]


def test_scc_against_networkx_and_topological():
    rng = np.random.default_rng(4)
    for _ in range(300):
        a = random_transition(rng, int(rng.integers(2, 10)), float(rng.uniform(0.05, 0.5)))
        comps = strongly_connected_components(graph_of(validate_transition(a)))
        g, ref = nx_components(a)
        assert set(comps) == ref
        pos = {v: k for k, c in enumerate(comps) for v in c}
        for u, v in g.edges:
            assert pos[u] <= pos[v]


def test_full_cycle_examples():
    assert has_full_cycle(graph_of(A0))
    assert not has_full_cycle(graph_of(ID2))
    assert has_full_cycle(graph_of(CYCLE3))


def test_full_cycle_is_a_closed_walk_through_everything():
    rng = np.random.default_rng(5)
    for _ in range(200):
        A = validate_transition(random_transition(rng, int(rng.integers(2, 8)), 0.3))
        walk = full_cycle(graph_of(A))
        assert (walk is not None) == is_irreducible(A)
        if walk is not None:
            assert walk[0] == walk[-1] == 1
            assert set(walk) == set(range(1, A.p + 1))
            assert all(A[a - 1, b - 1] for a, b in zip(walk, walk[1:]))


def test_count_paths_examples():
    assert count_paths(A0, 1, 1, 2) == 2
    assert count_paths(A0, 1, 1, 1) == 0
    assert count_paths(CYCLE3, 2, 2, 3) == 1


def test_chapman_kolmogorov_and_norm():
    rng = np.random.default_rng(6)
    for _ in range(30):
        A = validate_transition(random_transition(rng, int(rng.integers(2, 6)), 0.5))
        m, n = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        for i in range(1, A.p + 1):
            for j in range(1, A.p + 1):
                lhs = count_paths(A, i, j, m + n)
                rhs = sum(count_paths(A, i, k, m) * count_paths(A, k, j, n) for k in range(1, A.p + 1))
                assert lhs == rhs
        total = sum(count_paths(A, i, j, n) for i in range(1, A.p + 1) for j in range(1, A.p + 1))
        assert total == int(np.linalg.matrix_power(np.array(A.entries, dtype=object), n).sum())


def test_exact_big_integers():
    full = validate_transition([[1, 1], [1, 1]])
    assert count_paths(full, 1, 1, 200) == 2**199
    assert matrix_power_exact(full, 0) == [[1, 0], [0, 1]]
