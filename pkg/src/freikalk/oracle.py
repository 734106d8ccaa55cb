"""Sampling-based corroboration and brute-force cross-checks.

Membership in a relator closure times a series term is only recursively
enumerable, so finding nothing is evidence, never proof.  Every reported
counterexample carries its factorization and re-verifies by free reduction.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .filtration import LevelIndex, in_level, relator_product
from .freiheit import lcs_relative_criterion, retract, derivative_criterion, derivative_residues
from .magnus import INF, basic_commutators, ideal_valuation, lcs_class
from .ring import GammaQuotient, RingElement
from .schreier import SchreierSystem
from .words import IDENTITY, FreeGroup, Word, commutator, conjugate, left_normed


@dataclass
class SampleSpec:
    relators: list
    conj_len: int = 3
    factors: int = 3
    count: int = 1000
    seed: int = 0
    level: LevelIndex = field(default_factory=lambda: LevelIndex(1, 2))
    h_bias: float = 0.5  # chance that conjugators and the series part are drawn inside H
    with_series: bool = True

    def __post_init__(self):
        if self.factors < 1 or self.count < 0 or self.conj_len < 0:
            raise ValueError("sample bounds must be non-negative with at least one factor")
        if not 0.0 <= self.h_bias <= 1.0:
            raise ValueError("h_bias must lie in [0, 1]")

    def to_json(self):
        return {
            "relators": [str(r) for r in self.relators],
            "conj_len": self.conj_len,
            "factors": self.factors,
            "count": self.count,
            "seed": self.seed,
            "level": {"k": self.level.k, "l": self.level.l},
            "h_bias": self.h_bias,
        }


@dataclass
class Sample:
    word: Word
    factors: list  # (relator index, sign, conjugator)
    series_part: Word

    def verify(self, relators, level_l, rank) -> bool:
        prod = relator_product(relators, self.factors)
        return prod * self.series_part == self.word and in_level(
            self.series_part, level_l, SchreierSystem(rank)
        )


def _schreier_letter(rng, rank, gens, system):
    # a nontrivial Schreier generator s g_j (s g_j)bar^-1 with s drawn from a small box
    while True:
        vec = tuple(rng.randint(-1, 1) if g in gens else 0 for g in range(1, rank + 1))
        s = Word(tuple((g + 1, e) for g, e in enumerate(vec) if e))
        j = rng.choice(sorted(gens))
        w = system.schreier_generator(s, j)
        if w is not None:
            return w


def series_element(rng, rank, l, gens, system) -> Word:
    """Left-normed commutator of l Schreier letters built from ``gens``: lies in level l."""
    letters = [_schreier_letter(rng, rank, gens, system) for _ in range(max(l, 1))]
    return left_normed(letters) if len(letters) > 1 else letters[0]


def _word_in(rng, gens, max_len):
    gens = sorted(gens)
    n = rng.randint(0, max_len) if max_len > 0 else 0
    letters = []
    for _ in range(n):
        while True:
            a = rng.choice(gens) * rng.choice((1, -1))
            if not letters or a != -letters[-1]:
                break
        letters.append(a)
    return Word.from_letters(letters)


def sample_RN_element(spec: SampleSpec, rng, rank: int, H=None, system=None) -> Sample:
    """One element ``(product of relator conjugates) * u`` with u at the spec's level."""
    system = system or SchreierSystem(rank)
    allg = set(range(1, rank + 1))
    biased = H is not None and rng.random() < spec.h_bias
    pool = set(H) if biased else allg
    factors = []
    if spec.relators:
        for _ in range(rng.randint(1, max(spec.factors, 1))):
            idx = rng.randrange(len(spec.relators))
            sign = rng.choice((1, -1))
            f = _word_in(rng, pool, spec.conj_len)
            factors.append((idx, sign, f))
    u = IDENTITY
    if spec.with_series and (not spec.relators or rng.random() < 0.5):
        series_gens = pool if len(pool) >= 1 else allg
        u = series_element(rng, rank, spec.level.l, series_gens, system)
    word = relator_product(spec.relators, factors) * u
    return Sample(word, factors, u)


def sample_stream(spec: SampleSpec, rank: int, H=None):
    rng = random.Random(spec.seed)
    system = SchreierSystem(rank)
    for _ in range(spec.count):
        yield sample_RN_element(spec, rng, rank, H, system)


@dataclass
class FalsifyReport:
    samples: int
    hits: int
    counterexamples: list
    level: LevelIndex
    spec: SampleSpec

    @property
    def found(self):
        return bool(self.counterexamples)

    def to_json(self):
        return {
            "result": "CounterexampleFound" if self.found else "NoneFound",
            "instances": self.samples,
            "hits": self.hits,
            "counterexamples": [
                {
                    "word": str(s.word),
                    "factors": [
                        {"relator": i, "sign": g, "conjugator": str(f)} for i, g, f in s.factors
                    ],
                    "series_part": str(s.series_part),
                }
                for s in self.counterexamples
            ],
            "level": {"k": self.level.k, "l": self.level.l},
            "seeds": [self.spec.seed],
            "note": "sampling is evidence only; an empty result proves nothing",
        }


def falsify_freedom(spec: SampleSpec, H, rank: int, max_report: int = 5) -> FalsifyReport:
    """Look for ``w`` in ``H ∩ R N_{1,l}`` outside ``N_{1,l}`` among samples."""
    H = set(H)
    system = SchreierSystem(rank)
    hits = 0
    found = []
    l = spec.level.l
    for s in sample_stream(spec, rank, H):
        if not s.word.generators() <= H:
            continue
        hits += 1
        if in_level(s.word, l, system):
            continue
        # a counterexample must stand on its certificate alone
        if s.verify(spec.relators, l, rank):
            found.append(s)
            if len(found) >= max_report:
                break
    return FalsifyReport(spec.count, hits, found, spec.level, spec)


# cross-validation -----------------------------------------------------------------


def lcs_relative_member(rng, rank, K, n, pieces=3):
    """Product of words in F_K and conjugates of basic commutators of weight n+1."""
    comms = [b.word for b in basic_commutators(rank, n + 1) if b.weight == n + 1]
    v = IDENTITY
    for _ in range(pieces):
        if rng.random() < 0.5 or not comms:
            v = v * _word_in(rng, K, 3)
        else:
            c = rng.choice(comms) ** rng.choice((1, -1))
            v = v * conjugate(c, _word_in(rng, range(1, rank + 1), 2))
    return v


def lcs_relative_truth(v: Word, K, n: int) -> bool:
    """Ground truth by retraction: ``v * retract(v)^-1`` must lie in ``gamma_{n+1}``."""
    c = v * retract(v, K).inverse()
    if c.is_identity():
        return True
    return ideal_valuation(RingElement.word_minus_one(c), n) == INF


def derivative_member(rng, rank, K):
    """``h * c^f * [n1, n2]`` with h in F_K, c in ``F_K ∩ [F,F]`` and n1, n2 in ``[F,F]``."""
    G = FreeGroup(rank)
    h = _word_in(rng, K, 4)
    ks = sorted(K)
    if len(ks) >= 2:
        c = commutator(_word_in(rng, K, 2) or Word.gen(ks[0]), _word_in(rng, K, 2) or Word.gen(ks[-1]))
    else:
        c = IDENTITY
    f = G.sample_word(4, rng)
    n1 = commutator(G.sample_word(3, rng), G.sample_word(3, rng))
    n2 = commutator(G.sample_word(3, rng), G.sample_word(3, rng))
    return h * conjugate(c, f) * commutator(n1, n2)


def cross_validate_criteria(seed: int = 0, sizes=None) -> dict:
    """Run every criterion on constructed members and random words against ground truth."""
    sizes = {"lcs_relative": 60, "derivative": 60, "lcs_weight": 4, **(sizes or {})}
    rng = random.Random(seed)
    report = {"seed": seed, "checks": {}, "disagreements": []}

    # lower central class of basic commutators
    ok = 0
    bcs = basic_commutators(3, sizes["lcs_weight"])
    for b in bcs:
        if lcs_class(b.word, sizes["lcs_weight"] + 1) == b.weight:
            ok += 1
        else:
            report["disagreements"].append({"check": "lcs_class", "word": b.label})
    report["checks"]["lcs_class"] = {"instances": len(bcs), "agree": ok}

    # relative criterion: constructed members, generator non-members and random words
    rank, K, n = 3, {1}, 2
    ok = total = 0
    for idx in range(sizes["lcs_relative"]):
        if idx % 3 == 0:
            v = lcs_relative_member(rng, rank, K, n)
        elif idx % 3 == 1:
            v = Word.gen(rng.choice([2, 3])) * lcs_relative_member(rng, rank, K, n, 1)
        else:
            v = FreeGroup(rank).sample_word(6, rng)
        total += 1
        if lcs_relative_criterion(v, K, n) == lcs_relative_truth(v, K, n):
            ok += 1
        else:
            report["disagreements"].append({"check": "lcs_relative", "word": str(v)})
    report["checks"]["lcs_relative"] = {"instances": total, "agree": ok}

    # derivative criterion modulo [F,F]
    q = GammaQuotient(2, rank)
    Kt = {1, 2}
    ok = total = 0
    for idx in range(sizes["derivative"]):
        v = derivative_member(rng, rank, Kt)
        total += 1
        if derivative_criterion(v, Kt, q):
            ok += 1
        else:
            report["disagreements"].append({"check": "derivative", "word": str(v)})
    bad = commutator(Word.gen(1), Word.gen(3))
    res = derivative_residues(bad, Kt, q)[3]
    total += 1
    if not res.is_zero():
        ok += 1
    else:
        report["disagreements"].append({"check": "derivative-nonmember", "word": str(bad)})
    report["checks"]["derivative"] = {"instances": total, "agree": ok}
    report["ok"] = not report["disagreements"]
    return report
