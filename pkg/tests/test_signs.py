import random

import pytest
from hypothesis import given, strategies as st

from signcoh.errors import DomainError
from signcoh.mutation import ExchangeMatrix, mutate_sequence, with_principal_coefficients
from signcoh.signs import (
    SignVector,
    approx_matches,
    column_sign_coherent,
    detect_stabilization,
    pattern_to_json,
    sign_trace,
    sign_vector,
)

from _gen import skew_symmetrizable, word

signs = st.sampled_from([-1, 0, 1])


def sv(text):
    return SignVector.parse(text)


def test_sign_vector_strings():
    assert str(sign_vector([-3, 4, 0, -1])) == "-+0-"
    assert sv("-+0-") == (-1, 1, 0, -1)
    assert sv("+-").flipped() == sv("-+")
    assert sv("+0-").swapped() == sv("-0+")
    assert sv("+-").is_strict and not sv("+0").is_strict


def test_sign_vector_errors():
    with pytest.raises(DomainError):
        sign_vector([])
    with pytest.raises(DomainError):
        SignVector([2])
    with pytest.raises(DomainError):
        sv("+x")


@given(st.lists(signs, min_size=1, max_size=6), st.data())
def test_approx_matches_definition(weak, data):
    strict = data.draw(st.lists(st.sampled_from([-1, 1]), min_size=len(weak), max_size=len(weak)))
    expected = all(w == 0 or w == s for w, s in zip(weak, strict))
    assert approx_matches(weak, strict) == expected


def test_approx_matches_rejects_weak_rhs():
    with pytest.raises(DomainError):
        approx_matches([1, 0], [1, 0])
    with pytest.raises(DomainError):
        approx_matches([1], [1, 1])


def test_approx_matches_examples():
    assert approx_matches(sv("0-"), sv("+-"))
    assert not approx_matches(sv("+-"), sv("--"))


def test_column_sign_coherence():
    assert column_sign_coherent([[1, 0], [2, -1]])
    assert not column_sign_coherent([[1, 0], [-2, -1]])
    assert not column_sign_coherent([[0, 1], [0, 1]])  # zero column


def _trace(*rows_per_step):
    return [[sv(r) for r in step.split()] for step in rows_per_step]


def test_stabilization_basic():
    tr = _trace("+0", "++ +-", "-+ -+", "+- +-", "-+ -+")
    st_ = detect_stabilization(tr)
    assert st_.T == 1 and st_.last == 4 and st_.tail_length == 3
    assert [str(s) for s in st_.tail] == ["-+", "+-", "-+"]


def test_stabilization_whole_trace():
    st_ = detect_stabilization(_trace("+-", "-+", "+-"))
    assert st_.T == 0 and st_.tail_length == 2


def test_stabilization_fails_at_end():
    assert detect_stabilization(_trace("+-", "+0")) is None
    assert detect_stabilization(_trace("+- -+")) is None
    assert detect_stabilization([]) is None


def test_zero_rows_ignored_but_needed():
    assert detect_stabilization(_trace("00", "00")) is None
    assert detect_stabilization(_trace("+-", "+- 00")).T == 0


def test_relaxed_mode_accepts_compatible_zeros():
    tr = _trace("+0 +-", "0+ -+")
    assert detect_stabilization(tr) is None
    relaxed = detect_stabilization(tr, require_strict=False)
    assert relaxed.T == 0 and str(relaxed.tail[0]) == "-+"


def test_reference_and_start():
    ref = {n: sv("-+") if n % 2 == 0 else sv("+-") for n in range(10)}
    tr = _trace("+-", "+-", "-+")  # indices 0, 1, 2
    assert detect_stabilization(tr, reference=ref).T == 0
    shifted = detect_stabilization(tr, reference=lambda n: ref[n + 1], start=5)
    assert shifted.T == 5 and shifted.last == 7 and shifted.tail_length == 2
    assert detect_stabilization(_trace("++", "+-"), reference=ref, start=1) is None


def test_sign_trace_requires_frozen():
    with pytest.raises(DomainError):
        sign_trace(ExchangeMatrix.from_blocks([[0, 1], [-1, 0]]), [1])


def test_pattern_to_json():
    assert pattern_to_json({2: sv("+-"), -1: (0, 1)}) == {"-1": "0+", "2": "+-"}


def test_principal_coefficients_sign_coherent_small():
    rng = random.Random(12)
    for _ in range(100):
        n = rng.randint(2, 4)
        b, _ = skew_symmetrizable(rng, n, weights=(1, 2))
        for m in mutate_sequence(with_principal_coefficients(b), word(rng, n, 8)):
            assert column_sign_coherent(m.frozen)
