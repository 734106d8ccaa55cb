import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import words
from freikalk.errors import InvalidGenerator, NotInVerbal
from freikalk.fox import (
    chain_rule_check,
    conjugation_congruence_check,
    derivative_vector,
    derive,
    fundamental_decomposition,
)
from freikalk.grammar import parse_ring, parse_word
from freikalk.ring import GammaQuotient, RingElement
from freikalk.words import Word


def R(text):
    return RingElement(parse_ring(text))


def test_examples():
    assert derive(parse_word("y1*y2"), 1) == R("y2")
    assert derive(parse_word("y1*y2"), 2) == R("1")
    assert derive(parse_word("[y1,y2]"), 1) == R("y2 - [y1,y2]")
    assert derive(parse_word("[y1,y3]"), 3) == R("1 - y3^-1*y1*y3")
    assert derivative_vector(parse_word("y1*y2"), 2) == [R("y2"), R("1")]


def test_index_checked():
    with pytest.raises(InvalidGenerator):
        derive(Word.gen(1), 0)
    with pytest.raises(InvalidGenerator):
        derive(Word.gen(1), 3, rank=2)


@given(words(4, 20), words(4, 20), st.integers(1, 4))
def test_product_rule(u, v, k):
    eps = 1
    assert derive(u * v, k) == derive(u, k) * RingElement(v) + derive(v, k) * eps


@given(words(4, 20), st.integers(1, 4))
def test_inverse_rule(u, k):
    assert derive(u.inverse(), k) == -(derive(u, k) * RingElement(u.inverse()))


@given(words(4, 20))
def test_fundamental_identity(u):
    parts = fundamental_decomposition(u, 4)
    total = RingElement()
    for j, d in enumerate(parts, start=1):
        total = total + RingElement.word_minus_one(Word.gen(j)) * d
    assert total == RingElement.word_minus_one(u)


@given(words(3, 8), words(3, 8), words(3, 6), st.integers(1, 3))
def test_conjugation_congruence(a, b, f, k):
    r = parse_word("[y1,y2]").substitute({1: a or Word.gen(1), 2: b or Word.gen(2)})
    assert conjugation_congruence_check(r, f, k, GammaQuotient(2, 3))


def test_conjugation_congruence_needs_verbal_relator():
    with pytest.raises(NotInVerbal):
        conjugation_congruence_check(Word.gen(1), Word.gen(2), 1, GammaQuotient(2, 2))


def test_chain_rule_example():
    basis = [parse_word("y1*y2"), parse_word("y2^3")]
    v = basis[0] * basis[1]
    assert all(chain_rule_check(v, basis, j) for j in (1, 2))
