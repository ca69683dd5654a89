import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowforge.chow import DivisorClass, build_ring
from chowforge.errors import NotAFlatError, ParseError, RankError
from chowforge.identities import random_divisor
from chowforge.matroid import Matroid
from chowforge.parse import flat_token, parse_divisor, render_divisor

from corpus import SMALL

U34 = Matroid.uniform(3, 4)


def test_nef_witness_expression():
    D = parse_divisor(U34, "2*alpha - x{2,3} - x{2,4} - x{1,3} - x{1,4}")
    ring = build_ring(U34)
    expected = ring.alpha() * 2 - ring.x([2, 3]) - ring.x([2, 4]) - ring.x([1, 3]) - ring.x([1, 4])
    assert D.element() == expected


def test_alpha_and_beta_spellings():
    ring = build_ring(U34)
    assert parse_divisor(U34, "alpha_E").element() == ring.alpha()
    assert parse_divisor(U34, "alpha_{1,2,3,4}").element() == ring.alpha()
    assert parse_divisor(U34, "beta").element() == ring.beta()
    assert parse_divisor(U34, "beta_{1,2}").element() == ring.beta_S([1, 2])
    assert parse_divisor(U34, "alpha_{12}").element() == ring.alpha_S([1, 2])
    assert parse_divisor(U34, "x_{12}") == parse_divisor(U34, "x{1,2}")
    assert parse_divisor(U34, "S_1").element() == ring.stair(1)
    assert parse_divisor(U34, "S_{2}").element() == ring.stair(2)


def test_arithmetic():
    ring = build_ring(U34)
    D = parse_divisor(U34, "(alpha + x{1}) * 3/2 - -x{1,2}")
    assert D.element() == (ring.alpha() + ring.x([1])) * Fraction(3, 2) + ring.x([1, 2])
    assert parse_divisor(U34, "x{1} − x{2}").element() == ring.x([1]) - ring.x([2])
    assert parse_divisor(U34, "0").element().is_zero()
    assert parse_divisor(U34, "x{1}/2*4") == parse_divisor(U34, "2*x{1}")


def test_json_mapping():
    D = parse_divisor(U34, {"alpha": 2, "x{1,2}": "-1/2"})
    ring = build_ring(U34)
    assert D.element() == ring.alpha() * 2 - ring.x([1, 2]) / 2
    with pytest.raises(ParseError):
        parse_divisor(U34, {"3": 1})
    with pytest.raises(ParseError):
        parse_divisor(U34, {"alpha": "abc"})
    with pytest.raises(ParseError):
        parse_divisor(U34, 5)


def test_not_a_flat():
    M = Matroid.uniform(2, 3)
    with pytest.raises(NotAFlatError) as info:
        parse_divisor(M, "x{1,3}")
    assert info.value.details["subset"] == [1, 3]
    assert info.value.code == "NOT_A_FLAT"
    with pytest.raises(NotAFlatError):
        parse_divisor(U34, "x{1,2,3,4}")


def test_error_positions():
    cases = [
        ("alpha + ", 7),
        ("alpha $ beta", 6),
        ("2 * (alpha", 10),
        ("alpha beta", 6),
        ("x{1,7}", 0),
        ("x{}", 0),
    ]
    for text, pos in cases:
        with pytest.raises(ParseError) as info:
            parse_divisor(U34, text)
        assert info.value.details["position"] == pos, text
        assert info.value.code == "PARSE"


def test_type_errors():
    for text in ("alpha * beta", "alpha / x{1}", "alpha / 0", "alpha + 1", "3", "x"):
        with pytest.raises(ParseError):
            parse_divisor(U34, text)


def test_stair_rank_error():
    with pytest.raises(RankError) as info:
        parse_divisor(U34, "x{1} + S_{3}")
    assert info.value.details["position"] == 7
    with pytest.raises(RankError):
        parse_divisor(U34, "S_0")


def test_render_examples():
    D = DivisorClass(U34, {U34.to_mask([1]): -1, U34.to_mask([1, 2]): Fraction(3, 2)})
    assert render_divisor(D) == "-x{1} + 3/2*x{1,2}"
    assert render_divisor(DivisorClass(U34, {})) == "0"
    assert flat_token(U34, U34.to_mask([2, 4])) == "x{2,4}"


def test_wide_ground_set_labels():
    M = Matroid.uniform(2, 11)
    D = parse_divisor(M, "x{10} - x{11}")
    assert render_divisor(D) == "x{10} - x{11}"
    assert parse_divisor(M, "x_{10}") == parse_divisor(M, "x{10}")


def test_round_trip_corpus():
    rng = random.Random(3)
    for M in SMALL:
        for _ in range(10):
            D = random_divisor(M, rng)
            again = parse_divisor(M, render_divisor(D))
            assert again.coeffs == D.coeffs
            assert again == D


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.integers(0, 9), st.fractions(min_value=-10, max_value=10, max_denominator=5), max_size=6))
def test_round_trip_rationals(raw):
    M = U34
    flats = build_ring(M).flats
    D = DivisorClass(M, {flats[k]: v for k, v in raw.items()})
    assert parse_divisor(M, render_divisor(D)).coeffs == D.coeffs
