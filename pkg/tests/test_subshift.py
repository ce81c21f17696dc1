import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coupled_entropy.errors import SymbolOutOfRange
from coupled_entropy.subshift import (
    SymbolSequence,
    count_words,
    first_disagreement,
    is_admissible,
    sequence_metric,
    shift,
    subshift_entropy,
)
from coupled_entropy.trans_matrix import validate_transition

from conftest import random_sequence, random_transition
from oracles import brute_words

A0 = validate_transition([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
GOLDEN = validate_transition([[1, 1], [1, 0]])
CYCLE3 = validate_transition([[0, 1, 0], [0, 0, 1], [1, 0, 0]])


def test_admissible_examples():
    assert is_admissible(A0, (1, 2))
    assert not is_admissible(A0, (1, 1))
    assert is_admissible(A0, SymbolSequence((), (1, 3)))


def test_admissible_checks_seam_and_wrap():
    assert not is_admissible(A0, SymbolSequence((1,), (1, 2)))
    assert not is_admissible(A0, SymbolSequence((), (1, 2, 3, 1)))


def test_symbol_out_of_range():
    with pytest.raises(SymbolOutOfRange):
        is_admissible(A0, (1, 4))
    with pytest.raises(SymbolOutOfRange):
        is_admissible(A0, SymbolSequence((0,), (1,)))


def test_count_words_examples():
    assert count_words(A0, 1) == 3
    assert count_words(A0, 3) == 12
    assert count_words(GOLDEN, 3) == 5


def test_count_words_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(40):
        a = random_transition(rng, int(rng.integers(2, 5)), 0.5)
        A = validate_transition(a)
        for n in range(1, 6):
            assert count_words(A, n) == brute_words(a, n)


def test_entropy_examples():
    assert abs(subshift_entropy(A0) - math.log(2)) <= 1e-12
    assert abs(subshift_entropy(CYCLE3)) <= 1e-12
    assert abs(subshift_entropy(GOLDEN) - 0.481212) <= 1e-6


def test_word_count_rate_improves():
    target = subshift_entropy(GOLDEN)
    e15 = abs(math.log(count_words(GOLDEN, 15)) / 15 - target)
    e30 = abs(math.log(count_words(GOLDEN, 30)) / 30 - target)
    assert e30 <= e15


def test_shift_examples():
    assert shift(SymbolSequence((1,), (2, 3))) == SymbolSequence((), (2, 3))
    assert shift(SymbolSequence((), (1, 3))) == SymbolSequence((), (3, 1))
    assert shift(SymbolSequence((1, 2), (3,))) == SymbolSequence((2,), (3,))


def test_metric_examples():
    a = SymbolSequence((), (1, 3))
    assert sequence_metric(a, SymbolSequence((1, 3, 1), (3, 1))) == 0.0
    assert sequence_metric(a, SymbolSequence((), (2, 3))) == 1.0
    assert sequence_metric(a, SymbolSequence((1, 3, 1, 2), (3,))) == 0.125


def test_config_round_trip():
    s = SymbolSequence((2,), (3, 1))
    assert SymbolSequence.from_config(s.to_config()) == s


def test_empty_period_rejected():
    with pytest.raises(ValueError):
        SymbolSequence((1,), ())


symbols = st.lists(st.integers(1, 3), min_size=0, max_size=5)
periods = st.lists(st.integers(1, 3), min_size=1, max_size=4)
seqs = st.builds(lambda a, b: SymbolSequence(tuple(a), tuple(b)), symbols, periods)


@settings(max_examples=200, deadline=None)
@given(seqs, seqs, seqs)
def test_metric_is_an_ultrametric(a, b, c):
    assert sequence_metric(a, b) == sequence_metric(b, a)
    assert sequence_metric(a, c) <= max(sequence_metric(a, b), sequence_metric(b, c))
    same = a.prefix(64) == b.prefix(64)
    assert (sequence_metric(a, b) == 0.0) == same


@settings(max_examples=200, deadline=None)
@given(seqs, seqs, st.integers(0, 20))
def test_close_means_long_common_prefix(a, b, N):
    if sequence_metric(a, b) <= 1 / (2**N + 1):
        assert a.prefix(N + 1) == b.prefix(N + 1)


@settings(max_examples=200, deadline=None)
@given(seqs)
def test_shift_preserves_admissibility_and_drops_one_symbol(s):
    t = shift(s)
    assert t.prefix(20) == s.prefix(21)[1:]
    if is_admissible(A0, s):
        assert is_admissible(A0, t)


def test_first_disagreement_horizon():
    a = SymbolSequence((), (1, 2, 1, 2, 1, 3))
    b = SymbolSequence((), (1, 2))
    assert first_disagreement(a, b) == 5


def test_random_sequences_are_admissible():
    rng = np.random.default_rng(12)
    for _ in range(50):
        assert is_admissible(A0, random_sequence(rng, A0))
