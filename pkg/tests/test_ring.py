from hypothesis import given

from conftest import words
from freikalk.grammar import parse_word
from freikalk.magnus import ideal_valuation
from freikalk.ring import (
    GammaQuotient,
    RingElement,
    augmentation,
    coset_map,
    power_difference_normalize,
    sorted_normal_form,
)
from freikalk.words import Word

y1, y2 = Word.gen(1), Word.gen(2)


def elem(*ws):
    out = RingElement()
    for c, w in enumerate(ws, start=1):
        out = out + RingElement(w) * (c if c % 2 else -c)
    return out


@given(words(3, 5), words(3, 5), words(3, 5))
def test_ring_axioms(a, b, c):
    x, y, z = elem(a, b), elem(b, c), elem(c)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z
    assert x - x == RingElement.zero()
    assert x * RingElement.one() == x


@given(words(3, 5), words(3, 5), words(3, 5))
def test_augmentation_is_multiplicative(a, b, c):
    x, y = elem(a, b), elem(c, a)
    assert augmentation(x * y) == augmentation(x) * augmentation(y)


def test_commutator_identity():
    # (a-1)(b-1) = (b-1)(a-1) + ba([a,b]-1)
    a, b = y1, y2
    lhs = RingElement.word_minus_one(a) * RingElement.word_minus_one(b)
    rhs = RingElement.word_minus_one(b) * RingElement.word_minus_one(a) + RingElement(b * a) * (
        RingElement.word_minus_one(parse_word("[y1,y2]"))
    )
    assert lhs - rhs == RingElement.zero()


def test_power_difference():
    assert power_difference_normalize(y1, 2) == -(RingElement.word_minus_one(y1) ** 2)


@given(words(2, 6))
def test_power_difference_lies_deeper(a):
    for n in (2, 3):
        u = power_difference_normalize(a, n)
        assert u.is_zero() or ideal_valuation(u, 4) >= 2


def test_abelian_images():
    q = GammaQuotient(2, 2)
    assert coset_map(RingElement(y1 * parse_word("[y1,y2]")) - RingElement(y1), q).is_zero()
    img = coset_map(1 - RingElement(y1), q)
    assert not img.is_zero() and str(img) == "1 - y1"
    assert sorted_normal_form((1, 1)) == y1 * y2
    assert q.key(y2 * y1) == q.key(y1 * y2)


def test_class_three_quotient():
    q = GammaQuotient(3, 2)
    assert not q.contains(parse_word("[y1,y2]"))
    assert q.contains(parse_word("[y1,y2,y1]"))


@given(words(2, 6), words(2, 6))
def test_quotient_map_is_a_ring_map(a, b):
    q = GammaQuotient(2, 2)
    x, y = elem(a, b), elem(b)
    assert coset_map(x * y, q) == coset_map(x, q) * coset_map(y, q)
    assert coset_map(x + y, q) == coset_map(x, q) + coset_map(y, q)


def test_unit_monomial_inverse():
    q = GammaQuotient(2, 2)
    m = coset_map(RingElement(y2), q)
    assert m.is_unit_monomial()
    assert (m * m.inverse() - 1).is_zero()
