import pytest
from hypothesis import given

from conftest import words
from freikalk.errors import ParseError
from freikalk.grammar import format_ring, parse_ring, parse_word, parse_words
from freikalk.ring import RingElement
from freikalk.words import IDENTITY, Word, commutator


def test_notations_agree():
    a = parse_word("y1*y2^-1")
    assert parse_word("x1 x2^-1") == a
    assert parse_word("y1Y2") == a
    assert parse_word("(y2 y1^-1)^-1") == a
    assert parse_word("1") == IDENTITY


def test_brackets_are_left_normed():
    y1, y2, y3 = (Word.gen(i) for i in (1, 2, 3))
    assert parse_word("[y1,y2]") == commutator(y1, y2)
    assert parse_word("[y1,y2,y3]") == commutator(commutator(y1, y2), y3)
    assert parse_word("[[y1,y2],[y1,y3]]") == commutator(commutator(y1, y2), commutator(y1, y3))


def test_parse_words():
    assert parse_words("[y1,y2];[y3,y4]") == [parse_word("[y1,y2]"), parse_word("[y3,y4]")]


@pytest.mark.parametrize("bad", ["y1*(y2", "y", "y1^", "[y1 y2]", "z1", "y1)"])
def test_parse_errors_carry_position(bad):
    with pytest.raises(ParseError) as exc:
        parse_word(bad)
    assert "^" in exc.value.annotated()


@given(words(4, 15))
def test_word_text_roundtrip(w):
    assert parse_word(str(w)) == w


def test_ring_text():
    a = parse_ring("1 - 3*y2 + 2*y1*y2")
    assert a == {IDENTITY: 1, Word.gen(2): -3, parse_word("y1*y2"): 2}
    assert format_ring(parse_ring("y2 - [y1,y2]")) == "y2 - y1^-1*y2^-1*y1*y2"
    assert format_ring({}) == "0"


@given(words(3, 6), words(3, 6))
def test_ring_text_roundtrip(a, b):
    x = RingElement(a) * 3 - RingElement(b)
    assert RingElement.parse(str(x)) == x
