import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conecalc.errors import DimensionMismatch, ParseError
from conecalc.homlattice import (B, E, F, HomologyClass, ManifoldDescriptor, adjunction_genus,
                                 canonical_class, codim, format_class, is_exceptional_class,
                                 is_reduction_class, k_pairing, pair, parse_class,
                                 riemann_index, section_class, square, zero)

import oracles


def cls(text, n=3):
    return parse_class(text, n)


def as_tuple(A):
    return (A.a, A.b) + A.m


coeff = st.integers(-12, 12)


@st.composite
def classes(draw, n=None):
    n = draw(st.integers(0, 5)) if n is None else n
    return HomologyClass(draw(coeff), draw(coeff), tuple(draw(st.lists(coeff, min_size=n, max_size=n))))


@st.composite
def triples(draw):
    n = draw(st.integers(0, 5))
    return draw(classes(n)), draw(classes(n)), draw(classes(n)), draw(st.integers(-5, 5))


# pair ------------------------------------------------------------------------

def test_basis_pairings():
    assert pair(B(2), F(2)) == 1
    assert pair(E(1, 2), E(2, 2)) == 0
    assert pair(E(1, 2), E(1, 2)) == -1
    assert pair(B(2), B(2)) == 0 and pair(F(2), F(2)) == 0


def test_pair_worked_example():
    A = cls("B + 2F - E1", 1)
    assert pair(A, A) == 3


def test_pair_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        pair(B(1), B(2))


@settings(max_examples=2000, deadline=None)
@given(triples())
def test_pair_bilinear_symmetric_and_matches_gram(t):
    x, y, z, k = t
    assert pair(x, y) == pair(y, x)
    assert pair(x + k * y, z) == pair(x, z) + k * pair(y, z)
    assert pair(x, y) == oracles.gpair(as_tuple(x), as_tuple(y))


# canonical class / genus ------------------------------------------------------

@pytest.mark.parametrize("g,n,expected", [
    (2, 3, "-2B + 2F + E1 + E2 + E3"),
    (1, 0, "-2B"),
])
def test_canonical_class(g, n, expected):
    assert canonical_class(ManifoldDescriptor(g, n)) == parse_class(expected, n)


@pytest.mark.parametrize("g", range(0, 5))
@pytest.mark.parametrize("n", range(0, 5))
def test_canonical_matches_adjunction_oracle(g, n):
    K = canonical_class(ManifoldDescriptor(g, n))
    assert as_tuple(K) == oracles.canonical(g, n)
    for i in range(1, n + 1):
        assert pair(K, E(i, n)) == -1


def test_genus_examples():
    assert adjunction_genus(F(3), 2) == 0
    assert adjunction_genus(cls("E1 - E2"), 2) == 0
    for g in range(1, 5):
        for k in range(-3, 4):
            for I in [(), (1,), (1, 3), (1, 2, 3)]:
                assert adjunction_genus(section_class(k, I, 3), g) == g


def test_zero_class_genus_is_one():
    assert adjunction_genus(zero(2), 3) == 1
    assert format_class(zero(2)) == "0"


@settings(max_examples=2000, deadline=None)
@given(classes(), st.integers(0, 6))
def test_parity_and_codim_identities(A, g):
    K = canonical_class(ManifoldDescriptor(g, A.n))
    assert (square(A) + pair(K, A)) % 2 == 0
    assert k_pairing(A, g) == pair(K, A)
    assert codim(A, g) == pair(K, A) - square(A) == -riemann_index(A, g)
    assert codim(A, g) == oracles.oracle_codim(as_tuple(A), g)
    assert riemann_index(A, g) % 2 == 0


# index / codim ------------------------------------------------------------------

def test_index_examples():
    assert riemann_index(E(2, 3), 2) == 0
    assert riemann_index(cls("E1 - E2"), 2) == -2
    assert riemann_index(cls("B - E1"), 1) == -2


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("k", [-2, 0, 1, 3])
@pytest.mark.parametrize("I", [(), (2,), (1, 3), (1, 2, 3)])
def test_section_codim_formula(g, k, I):
    assert codim(section_class(k, I, 3), g) == -4 * k + 2 * g - 2 + 2 * len(I)


def test_codim_small_cases():
    assert codim(cls("F - E2"), 1) == 0
    assert codim(cls("E1 - E2"), 1) == 2


# predicates ---------------------------------------------------------------------

def test_exceptional_predicate():
    assert is_exceptional_class(E(1, 2), 1)
    assert is_exceptional_class(cls("F - E2", 2), 1)
    assert not is_exceptional_class(cls("F - E1 - E2", 2), 1)


def test_reduction_predicate():
    assert is_reduction_class(cls("F - E1 - E2"))
    assert is_reduction_class(cls("E1 - E2"))
    assert is_reduction_class(cls("E1 - E3"))
    assert not is_reduction_class(cls("E2 - E1"))
    assert not is_reduction_class(cls("F - E1"))


@pytest.mark.parametrize("g", [1, 2, 4])
def test_square_minus_two_spheres_have_codim_two(g):
    for text in ["E1 - E2", "F - E1 - E2", "E2 - E3", "F - E2 - E3"]:
        A = cls(text)
        assert adjunction_genus(A, g) == 0 and codim(A, g) == 2


# parse / format -------------------------------------------------------------------

def test_parse_examples():
    assert cls("B + 2F - E1 - E3") == HomologyClass(1, 2, (-1, 0, -1))
    assert parse_class("F-E2", 2) == HomologyClass(0, 1, (0, -1))
    assert format_class(parse_class("B+0F", 2)) == "B"
    assert parse_class(" 2 B -  3 E1 ", 1) == HomologyClass(2, 0, (-3,))
    assert parse_class("-E1 + F", 1) == HomologyClass(0, 1, (-1,))
    assert parse_class("0", 2) == zero(2)


@pytest.mark.parametrize("text,pos", [("B + ", 4), ("B ++ F", 3), ("B F", 2), ("X", 0), ("3", 0),
                                      ("E0", 0)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_class(text, 2)
    assert info.value.position == pos


def test_parse_index_beyond_n():
    with pytest.raises(DimensionMismatch):
        parse_class("E3", 2)


@settings(max_examples=2000, deadline=None)
@given(classes())
def test_format_parse_round_trip(A):
    text = format_class(A)
    assert parse_class(text, A.n) == A
    assert format_class(parse_class(text, A.n)) == text
