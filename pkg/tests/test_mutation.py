import random

import pytest
from hypothesis import given, settings, strategies as st

from signcoh.errors import DomainError
from signcoh.mutation import (
    ExchangeMatrix,
    find_skew_symmetrizer,
    is_irreducible,
    mutate,
    mutate_sequence,
    support_components,
    with_principal_coefficients,
)

from _gen import extended_matrices, skew_symmetrizable


def fz_mutate(rows, n, k):
    """Reference rule in absolute-value form: b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2."""
    k -= 1
    out = []
    for i, row in enumerate(rows):
        new = []
        for j, x in enumerate(row):
            if i == k or j == k:
                new.append(-x)
            else:
                new.append(x + (abs(row[k]) * rows[k][j] + row[k] * abs(rows[k][j])) // 2)
        out.append(tuple(new))
    return tuple(out)


def is_skew(d, b):
    n = len(b)
    return all(d[i] * b[i][j] == -d[j] * b[j][i] for i in range(n) for j in range(n))


@given(extended_matrices(), st.data())
def test_matches_reference_rule_and_eps(mat, data):
    b, frozen = mat
    bhat = ExchangeMatrix.from_blocks(b, frozen)
    k = data.draw(st.integers(1, bhat.n_mutable))
    plus = mutate(bhat, k, 1)
    assert plus == mutate(bhat, k, -1)
    assert plus.rows == fz_mutate(bhat.rows, bhat.n_mutable, k)


@given(extended_matrices(), st.data())
def test_involution(mat, data):
    bhat = ExchangeMatrix.from_blocks(*mat)
    k = data.draw(st.integers(1, bhat.n_mutable))
    assert mutate(mutate(bhat, k), k) == bhat


@given(extended_matrices(), st.lists(st.integers(1, 5), max_size=10))
def test_symmetrizer_preserved(mat, seq):
    bhat = ExchangeMatrix.from_blocks(*mat)
    seq = [k for k in seq if k <= bhat.n_mutable]
    d = find_skew_symmetrizer(bhat.principal)
    for m in mutate_sequence(bhat, seq):
        assert is_skew(d, m.principal)


@given(extended_matrices(max_m=3), st.lists(st.integers(1, 5), max_size=8))
def test_frozen_rows_evolve_independently(mat, seq):
    b, frozen = mat
    seq = [k for k in seq if k <= len(b)]
    together = mutate_sequence(ExchangeMatrix.from_blocks(b, frozen), seq)[-1]
    for r, row in enumerate(frozen):
        alone = mutate_sequence(ExchangeMatrix.from_blocks(b, [row]), seq)[-1]
        assert alone.frozen[0] == together.frozen[r]


def test_rank2_by_hand():
    bhat = ExchangeMatrix.from_blocks([[0, -2], [3, 0]], [[1, 0], [0, 1]])
    m = mutate(bhat, 1)
    assert m.principal == ((0, 2), (-3, 0))
    # row (1,0): column 1 flips; column 2 gets [-b_31]_+ b_12 + b_31 [b_12]_+ = 0
    assert m.frozen == ((-1, 0), (0, 1))
    m2 = mutate(m, 2)
    assert m2.frozen == ((-1, 0), (0, -1))


def test_markov_mutation_reverses_arrows():
    b = [[0, 2, -2], [-2, 0, 2], [2, -2, 0]]
    m = mutate(ExchangeMatrix.from_blocks(b), 1)
    assert m.principal == tuple(tuple(-x for x in row) for row in b)


def test_mutate_sequence_empty_and_length():
    bhat = with_principal_coefficients([[0, 1], [-1, 0]])
    assert mutate_sequence(bhat, []) == [bhat]
    assert len(mutate_sequence(bhat, [1, 2, 1])) == 4


@pytest.mark.parametrize("k", [0, 3, -1])
def test_bad_direction(k):
    bhat = with_principal_coefficients([[0, 1], [-1, 0]])
    with pytest.raises(DomainError):
        mutate(bhat, k)


def test_bad_eps():
    with pytest.raises(DomainError):
        mutate(with_principal_coefficients([[0, 1], [-1, 0]]), 1, eps=0)


@pytest.mark.parametrize("rows", [
    [[0, 1], [1, 0]],
    [[1, 0], [0, 0]],
    [[0, 1], [0, 0]],
    [[0, 1, 1], [-2, 0, 1], [-1, -1, 0]],
])
def test_not_skew_symmetrizable(rows):
    assert find_skew_symmetrizer(rows) is None
    with pytest.raises(DomainError):
        ExchangeMatrix.from_blocks(rows)


def test_shape_errors():
    with pytest.raises(DomainError):
        ExchangeMatrix(2, 0, [[0, 1]])
    with pytest.raises(DomainError):
        ExchangeMatrix(2, 1, [[0, 1], [-1, 0], [1]])
    with pytest.raises(TypeError):
        ExchangeMatrix(1, 0, [[0.5]])


def test_symmetrizer_values():
    assert find_skew_symmetrizer([[0, -2], [1, 0]]) == (1, 2)
    assert find_skew_symmetrizer([[0, -4], [6, 0]]) == (3, 2)
    # two blocks, each gcd-reduced independently
    d = find_skew_symmetrizer([[0, 2, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 3], [0, 0, -3, 0]])
    assert d == (1, 2, 1, 1)
    assert find_skew_symmetrizer([[0]]) == (1,)


def test_irreducible():
    assert is_irreducible([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    assert not is_irreducible([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    assert support_components([[0, 0], [0, 0]]) == [[0], [1]]


def test_random_generator_is_symmetrizable():
    rng = random.Random(1)
    for _ in range(200):
        b, d = skew_symmetrizable(rng, rng.randint(1, 5))
        assert is_skew(d, b)
        assert find_skew_symmetrizer(b) is not None


def test_entry_and_str():
    bhat = with_principal_coefficients([[0, 2], [-1, 0]])
    assert bhat.entry(1, 2) == 2
    assert bhat.shape == (4, 2)
    assert "-" in str(bhat)
    assert bhat.without_frozen_row(1).frozen == ((0, 1),)
    with pytest.raises(DomainError):
        bhat.without_frozen_row(3)


@settings(max_examples=30)
@given(st.integers(-10**30, 10**30))
def test_big_integers_exact(x):
    bhat = ExchangeMatrix.from_blocks([[0, 1], [-1, 0]], [[x, -x]])
    assert mutate(mutate(bhat, 2), 2) == bhat
