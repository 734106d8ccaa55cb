import random

import pytest

from freikalk.filtration import LevelIndex, in_level
from freikalk.grammar import parse_word
from freikalk.oracle import (
    SampleSpec,
    cross_validate_criteria,
    falsify_freedom,
    sample_stream,
    series_element,
)
from freikalk.schreier import SchreierSystem


def test_series_elements_lie_at_level():
    rng = random.Random(1)
    S = SchreierSystem(3)
    for l in (1, 2, 3):
        for _ in range(20):
            assert in_level(series_element(rng, 3, l, {1, 2, 3}, S), l, S)


def test_samples_verify():
    spec = SampleSpec([parse_word("[y1,y2]")], count=100, seed=4, level=LevelIndex(1, 2))
    assert all(s.verify(spec.relators, 2, 3) for s in sample_stream(spec, 3, {1, 2}))


def test_stream_is_seeded():
    spec = SampleSpec([parse_word("[y1,y3]")], count=50, seed=9)
    a = [s.word for s in sample_stream(spec, 3, {1, 2})]
    b = [s.word for s in sample_stream(spec, 3, {1, 2})]
    assert a == b


def test_finds_relator_in_subgroup():
    spec = SampleSpec([parse_word("[y1,y2]")], count=2000, seed=0)
    rep = falsify_freedom(spec, {1, 2}, 3)
    assert rep.found
    for s in rep.counterexamples:
        assert s.verify(spec.relators, 2, 3) and s.word.generators() <= {1, 2}
    assert rep.to_json()["result"] == "CounterexampleFound"


def test_nothing_for_free_relator():
    spec = SampleSpec([parse_word("[y1,y3]")], count=2000, seed=0)
    rep = falsify_freedom(spec, {1, 2}, 3)
    assert not rep.found and rep.to_json()["result"] == "NoneFound"


def test_cross_validation_agrees():
    rep = cross_validate_criteria(seed=3)
    assert rep["ok"], rep["disagreements"]


def test_empty_relators_find_nothing():
    spec = SampleSpec([], count=300, seed=1)
    rep = falsify_freedom(spec, {1, 2}, 3)
    assert not rep.found
    assert all(s.factors == [] for s in sample_stream(spec, 3, {1, 2}))


def test_bounds_validated():
    with pytest.raises(ValueError):
        SampleSpec([parse_word("[y1,y2]")], factors=0)
    with pytest.raises(ValueError):
        SampleSpec([], h_bias=1.5)
