import random

import pytest

from freikalk.errors import Inconclusive, NotInVerbal, RankTooSmall
from freikalk.filtration import FiltrationSignature, LevelIndex, in_level
from freikalk.freiheit import (
    Bounds,
    agrees_with_core,
    conjugate_into_H_mod,
    conjugator_candidates,
    freiheit_check,
    lcs_relative_criterion,
    nonconjugacy_certificate,
    climb_witness,
    retract,
    derivative_criterion,
    derivative_residues,
)
from freikalk.grammar import parse_word
from freikalk.oracle import lcs_relative_member, lcs_relative_truth, derivative_member
from freikalk.ring import GammaQuotient
from freikalk.schreier import SchreierSystem
from freikalk.words import Word

SIG = FiltrationSignature.parse("gamma2;m=[2]")
QUICK = Bounds(samples=0)


def test_derivative_nonmember_residue():
    q = GammaQuotient(2, 2)
    res = derivative_residues(parse_word("[y1,y2]"), {1}, q)
    assert str(res[2]) == "1 - y1"
    assert not derivative_criterion(parse_word("[y1,y2]"), {1}, q)


def test_derivative_members():
    rng = random.Random(11)
    q = GammaQuotient(2, 3)
    for _ in range(40):
        assert derivative_criterion(derivative_member(rng, 3, {1, 2}), {1, 2}, q)


def test_retract():
    assert retract(parse_word("y1*y3*y2^2*y3^-1"), {1, 2}) == parse_word("y1*y2^2")


def test_lcs_relative():
    assert lcs_relative_criterion(parse_word("[y1,y2,y3]"), {1}, 2)
    assert not lcs_relative_criterion(parse_word("[y1,y3]"), {1}, 2)
    with pytest.raises(Inconclusive):
        lcs_relative_criterion(parse_word("[y1,y3]"), {1}, 5, d=3)


def test_lcs_relative_against_retraction():
    rng = random.Random(12)
    for _ in range(40):
        v = lcs_relative_member(rng, 3, {1}, 2)
        assert lcs_relative_criterion(v, {1}, 2) and lcs_relative_truth(v, {1}, 2)


def test_conjugator_order():
    assert [str(f) for f in conjugator_candidates(3, 2)] == ["1", "y3^-1", "y3", "y3^-2", "y3^2"]


def test_provable_nonconjugacy():
    provable, depth = nonconjugacy_certificate(parse_word("[y1,y3]"), 1, 3)
    assert provable and depth == 0
    res = conjugate_into_H_mod(parse_word("[y1,y3]"), 1, 3)
    assert not res.found and res.provable


def test_conjugacy_witness():
    r = parse_word("[y1,y2]^y3")
    res = conjugate_into_H_mod(r, 1, 3, Bounds(conj=3))
    assert res.found and res.conjugator == parse_word("y3^-1")
    assert res.h == parse_word("[y1,y2]")
    assert in_level(res.residue, 2, SchreierSystem(3))


def test_verdict_free():
    v = freiheit_check(parse_word("[y1,y3]"), SIG, bounds=QUICK, rank=3)
    assert v.outcome == "Free" and v.provable


def test_verdict_not_free_with_certificates():
    r = parse_word("[y1,y2]")
    v = freiheit_check(r, SIG, bounds=QUICK, rank=3)
    assert v.outcome == "NotFree"
    w = v.witness()
    assert w.word == r and w.level == LevelIndex(1, 2)
    assert w.certificates(r, 3, {1, 2}) == {"in_H": True, "in_RN": True, "not_in_N": True}
    for t in v.targets:
        if t.witness is not None:
            assert all(t.witness.certificates(r, 3, {1, 2}).values())


def test_climb_reaches_next_level():
    r = parse_word("[y1,y2]")
    base = freiheit_check(r, SIG, [LevelIndex(1, 2)], QUICK, 3).witness()
    up = climb_witness(base, LevelIndex(1, 3), r, 3, {1, 2})
    assert up.level == LevelIndex(1, 3)
    assert all(up.certificates(r, 3, {1, 2}).values())


def test_second_level_relator_is_free():
    v = freiheit_check(parse_word("[[y1,y2],[y1,y3]]"), SIG, bounds=QUICK, rank=3)
    assert v.outcome == "Free" and v.level_of_relator == 2


def test_conjugated_relator_not_free():
    v = freiheit_check(parse_word("[y1,y2]^y3"), SIG, bounds=QUICK, rank=3)
    assert v.outcome == "NotFree" and v.conjugacy.conjugator == parse_word("y3^-1")


def test_input_checks():
    with pytest.raises(RankTooSmall):
        freiheit_check(parse_word("[y1,y2]"), SIG, rank=2)
    with pytest.raises(NotInVerbal):
        freiheit_check(Word.gen(1), SIG, rank=3)


@pytest.mark.parametrize("r", ["[y1,y3]", "[y1,y2]", "y2*[y1,y3]*y2^-1", "y3^2*[y1,y2]*y3^-2"])
def test_cyclic_core_invariance(r):
    assert agrees_with_core(parse_word(r), SIG, QUICK, 3)


def test_verdict_json_is_stable():
    r = parse_word("[y1,y2]")
    a = freiheit_check(r, SIG, bounds=QUICK, rank=3).to_json()
    b = freiheit_check(r, SIG, bounds=QUICK, rank=3).to_json()
    assert a == b and a["outcome"] == "NotFree"
