import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from signcoh.errors import DomainError
from signcoh.exchange import (
    SeedNode,
    balance_diagnostics,
    canonical_key,
    default_max_depth,
    distance,
    is_monotone_prefix,
    random_sequence,
)
from signcoh.markov import MARKOV_B
from signcoh.mutation import ExchangeMatrix, mutate_sequence, with_principal_coefficients

from _gen import skew_symmetrizable

RANK2 = [[0, -2], [3, 0]]
A2 = [[0, 1], [-1, 0]]


def brute_distance(b, target, max_depth):
    """Shortest word reaching ``target``, by enumerating every word in length order."""
    start = with_principal_coefficients(b)
    n = start.n_mutable
    for length in range(max_depth + 1):
        for w in itertools.product(range(1, n + 1), repeat=length):
            if mutate_sequence(start, w)[-1] == target:
                return length
    return None


def brute_monotone(b, seq):
    start = with_principal_coefficients(b)
    trace = mutate_sequence(start, seq)
    dists = [brute_distance(b, m, len(seq)) for m in trace]
    return all(x < y for x, y in zip(dists, dists[1:]))


def test_canonical_key_injective_on_shapes():
    a = ExchangeMatrix(1, 1, [[0], [256]])
    b = ExchangeMatrix(1, 1, [[0], [-256]])
    c = ExchangeMatrix(1, 0, [[0]])
    assert len({canonical_key(a), canonical_key(b), canonical_key(c)}) == 3
    assert SeedNode(a) == SeedNode(ExchangeMatrix(1, 1, [[0], [256]]))


@pytest.mark.parametrize("b", [RANK2, A2, MARKOV_B])
def test_distance_one(b):
    start = SeedNode.principal(b)
    for k in range(1, len(b) + 1):
        assert distance(start, start.mutate(k), 8) == 1
    assert distance(start, start, 0) == 0


def test_finite_type_cycle():
    # A2: the exchange graph is a pentagon, but labelled seeds need ten steps
    # to return; after five the start is back up to a transposition.
    start = SeedNode.principal(A2)
    seq = [1, 2] * 5
    assert mutate_sequence(start.matrix, seq)[-1] == start.matrix
    five = SeedNode(mutate_sequence(start.matrix, seq[:5])[-1])
    assert distance(start, five, 8) == brute_distance(A2, five.matrix, 8)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_distance_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    b, _ = skew_symmetrizable(rng, n, bound=3, weights=(1, 2))
    length = rng.randint(0, 5 if n == 2 else 4)
    seq = [rng.randint(1, n) for _ in range(length)]
    start = SeedNode.principal(b)
    target = mutate_sequence(start.matrix, seq)[-1]
    got = distance(start, SeedNode(target), length)
    assert got == brute_distance(b, target, length)
    assert got == distance(SeedNode(target), start, length)


def test_distance_budget_and_errors():
    start = SeedNode.principal(RANK2)
    far = SeedNode(mutate_sequence(start.matrix, [1, 2, 1, 2])[-1])
    assert distance(start, far, 3) is None
    assert distance(start, far, 4) == 4
    with pytest.raises(DomainError):
        distance(start, SeedNode.principal(MARKOV_B), 3)
    with pytest.raises(DomainError):
        distance(start, far, -1)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_monotone_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    b, _ = skew_symmetrizable(rng, n, bound=3, weights=(1, 2))
    seq = [rng.randint(1, n) for _ in range(rng.randint(1, 4))]
    verdict = is_monotone_prefix(b, seq, max_depth=8)
    assert verdict.status in ("verified", "violated")
    assert (verdict.status == "verified") == brute_monotone(b, seq)


def test_monotone_verdicts():
    assert is_monotone_prefix(RANK2, [1, 2] * 4).status == "verified"
    rep = is_monotone_prefix(RANK2, [1, 2, 2, 1])
    assert (rep.status, rep.step) == ("violated", 2)
    unk = is_monotone_prefix(RANK2, [1, 2] * 6, max_depth=5)
    assert (unk.status, unk.step, unk.verified_to) == ("unknown", 6, 5)
    # A2 wraps around its pentagon
    assert is_monotone_prefix(A2, [1, 2, 1, 2, 1, 2]).status == "violated"
    with pytest.raises(DomainError):
        is_monotone_prefix(RANK2, [])
    with pytest.raises(DomainError):
        is_monotone_prefix(RANK2, [3])


def test_default_depth():
    assert [default_max_depth(n) for n in (2, 3, 4, 5, 6)] == [8, 8, 6, 6, 4]


def test_random_sequence_deterministic():
    a = random_sequence(4, 50, 99)
    assert a == random_sequence(4, 50, 99)
    assert a != random_sequence(4, 50, 100)
    assert all(x != y for x, y in zip(a, a[1:]))
    assert set(a) <= {1, 2, 3, 4}
    with_rep = random_sequence(2, 200, 1, forbid_repeat=False)
    assert any(x == y for x, y in zip(with_rep, with_rep[1:]))
    with pytest.raises(DomainError):
        random_sequence(1, 5, 0)


def test_balance_diagnostics():
    # at n = 5 direction 3 has frequency 1/5, so 1/5 is the tightest floor
    d = balance_diagnostics([1, 2, 3] * 10, 3, Fraction(1, 5), 3)
    assert balance_diagnostics([1, 2, 3] * 10, 3, Fraction(1, 4), 3).balanced_proxy is False
    assert d.balanced_proxy and d.weakly_balanced_proxy
    assert d.frequencies == {1: Fraction(1, 3), 2: Fraction(1, 3), 3: Fraction(1, 3)}
    d = balance_diagnostics([1, 2] * 15, 3, Fraction(1, 4), 3)
    assert not d.balanced_proxy and not d.weakly_balanced_proxy
    assert d.counts[3] == 0 and d.balance_floor == 0
    # late direction: weakly balanced fails on early windows, frequency recovers slowly
    d = balance_diagnostics([1, 2] * 5 + [1, 2, 3] * 10, 3, Fraction(1, 10), 10)
    assert not d.weakly_balanced_proxy
    assert d.to_json()["delta"] == "1/10"


@pytest.mark.parametrize("args", [
    ([], 2, Fraction(1, 2), 2),
    ([1, 2], 2, Fraction(0), 2),
    ([1, 2], 2, Fraction(2, 3), 2),
    ([1, 2], 2, Fraction(1, 2), 1),
    ([1, 3], 2, Fraction(1, 2), 2),
])
def test_balance_errors(args):
    with pytest.raises(DomainError):
        balance_diagnostics(*args)
