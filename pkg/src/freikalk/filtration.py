"""Filtration bookkeeping over the commutator subgroup N = [F, F].

The series is ``N_{1,l} = gamma_l(N)`` for ``l = 1..m_1+1``.  Elements of N are
rewritten into Schreier generators, and the Magnus expansion in those
variables measures depth: ``w`` lies in ``gamma_l(N)`` exactly when the
expansion of ``w - 1`` vanishes below degree l.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import comb

from .errors import (
    Inconclusive,
    LevelOutOfRange,
    NotInVerbal,
    UnknownLayer,
    UnsupportedQuotient,
    ZeroElement,
)
from .magnus import INF, expand, expand_word, ideal_valuation, lcs_class
from .ring import GammaQuotient, QuotRingElement, RingElement, sorted_normal_form
from .schreier import SchreierSystem
from .words import IDENTITY, Word, all_words, conjugate

_SIG_RE = re.compile(r"^\s*(gamma\d+)\s*;\s*m\s*=\s*\[([\d\s,]+)\]\s*$")


@dataclass(frozen=True)
class FiltrationSignature:
    classes: tuple
    base: str = "gamma2"

    def __post_init__(self):
        if not self.classes or any(m < 1 for m in self.classes):
            raise ValueError("signature needs at least one positive class")
        if self.base != "gamma2":
            raise UnsupportedQuotient(f"base {self.base} is not supported; use gamma2")

    @classmethod
    def parse(cls, text: str):
        m = _SIG_RE.match(text)
        if not m:
            raise ValueError(f"cannot read signature {text!r}; expected e.g. 'gamma2;m=[2]'")
        classes = tuple(int(x) for x in m.group(2).split(",") if x.strip())
        return cls(classes, m.group(1))

    def __str__(self):
        return f"{self.base};m=[{','.join(map(str, self.classes))}]"

    @property
    def m1(self):
        return self.classes[0]

    def levels(self, k: int = 1):
        """All level indices ``(k, 1) .. (k, m_k + 1)``."""
        return [LevelIndex(k, l) for l in range(1, self.classes[k - 1] + 2)]


@dataclass(frozen=True, order=True)
class LevelIndex:
    k: int
    l: int

    @classmethod
    def parse(cls, text: str):
        a, b = text.strip().strip("()").split(",")
        return cls(int(a), int(b))

    def normalize(self, sig: FiltrationSignature):
        """Rewrite ``(k+1, 1)`` as ``(k, m_k + 1)``; only level one is computable."""
        k, l = self.k, self.l
        if l < 1:
            raise LevelOutOfRange(f"level index {self} has l < 1")
        if k >= 2 and l == 1 and k - 1 <= len(sig.classes):
            k, l = k - 1, sig.classes[k - 2] + 1
        if k != 1:
            raise LevelOutOfRange(f"level {self} is beyond the first tower level")
        if l > sig.m1 + 1:
            raise LevelOutOfRange(f"level {self} exceeds m_1 + 1 = {sig.m1 + 1}")
        return LevelIndex(k, l)

    def __str__(self):
        return f"({self.k},{self.l})"


# membership in the series ----------------------------------------------------


def schreier_class(zword: Word, d: int):
    """Lower central class of a word over Schreier generators (INF past ``d``)."""
    if zword.is_identity():
        return INF
    return ideal_valuation(RingElement.word_minus_one(zword), d)


def in_level(w: Word, l: int, system: SchreierSystem) -> bool:
    """Is ``w`` in ``gamma_l([F,F])``?  Exact: only degrees below l are needed."""
    if not system.in_kernel(w):
        return False
    if l <= 1:
        return True
    zword = system.rewrite_in_schreier(w)
    return ideal_valuation(RingElement.word_minus_one(zword), l - 1) == INF


def level_class(w: Word, system: SchreierSystem, d: int):
    """Largest l with ``w`` in ``gamma_l([F,F])``; 0 outside the kernel, INF past ``d``."""
    if not system.in_kernel(w):
        return 0
    return schreier_class(system.rewrite_in_schreier(w), d)


def locate_level(r: Word, sig: FiltrationSignature, d: int = 8, system=None) -> int:
    system = system or SchreierSystem(max(r.max_generator(), 1))
    if not system.in_kernel(r):
        raise NotInVerbal(f"{r} is not in the commutator subgroup")
    if r.is_identity():
        raise LevelOutOfRange("the identity lies in every level")
    zword = system.rewrite_in_schreier(r)
    i = lcs_class(zword, d)
    if i == INF:
        raise Inconclusive(f"class of {r} exceeds truncation {d}", d)
    if i > sig.m1:
        raise LevelOutOfRange(f"{r} lies at level {i} > m_1 = {sig.m1}")
    return i


def delta_valuation(u, d: int = 8):
    """Depth of a ring element over Schreier generators in the ideal-power filtration."""
    return ideal_valuation(u, d)


def _to_schreier_ring(u: RingElement, system: SchreierSystem) -> RingElement:
    out = RingElement()
    for w, c in u.terms.items():
        out = out + RingElement({system.rewrite_in_schreier(w): c})
    return out


def restriction_check(u: RingElement, K, rank: int, i: int | None = None, d: int = 8) -> bool:
    """Valuation of an ``H ∩ N``-supported element agrees in N and in ``H ∩ N``.

    The ambient valuation uses Schreier generators of ``[F,F]``; the intrinsic
    one uses the Schreier generators of ``[H,H]`` with H's generators
    renumbered ``1..|K|``.  With ``i`` given only membership in the i-th
    power is compared.
    """
    K = sorted(K)
    amb_sys = SchreierSystem(rank, K)
    ren = {k: Word.gen(idx + 1) for idx, k in enumerate(K)}
    int_sys = SchreierSystem(max(len(K), 1), range(1, len(K) + 1))
    for w in u.terms:
        if not w.generators() <= set(K):
            raise ValueError(f"{w} is not in the subgroup generated by {K}")
    amb = delta_valuation(_to_schreier_ring(u, amb_sys), d)
    intr = delta_valuation(_to_schreier_ring(u.substitute(ren), int_sys), d)
    if i is None:
        return amb == intr
    return (amb >= i) == (intr >= i)


def leading_form(u, d: int = 8):
    """``(degree, {monomial: coef})`` of the lowest nonzero homogeneous component."""
    s = expand(u, d)
    v = s.valuation()
    if v == INF:
        raise ZeroElement("element vanishes through the truncation degree")
    return v, s.homogeneous(v)


def monomial_weight(factors, layers) -> int:
    """Sum of ``exponent * layer`` over ``(factor, exponent)`` pairs.

    A bare factor counts with exponent one; ``layers`` maps factors to their
    lower central class.
    """
    total = 0
    for f in factors:
        c, a = f if isinstance(f, tuple) else (f, 1)
        try:
            total += a * layers[c]
        except KeyError:
            raise UnknownLayer(f"no layer assigned to {c}") from None
    return total


# isolator search ---------------------------------------------------------------


@dataclass
class RootResult:
    found: bool
    power: int | None = None
    factors: list = field(default_factory=list)  # (relator index, sign, conjugator)
    residue: Word | None = None
    searched: int = 0

    def product(self, relators):
        return relator_product(relators, self.factors)

    def __str__(self):
        return f"YES({self.power})" if self.found else "NO_WITHIN_BOUND"


def relator_product(relators, factors) -> Word:
    out = IDENTITY
    for idx, sign, f in factors:
        out = out * conjugate(relators[idx] ** sign, f)
    return out


def is_in_root(
    v: Word,
    target: LevelIndex,
    relators,
    power_bound: int,
    conj_bound: int,
    d: int = 8,
    sig: FiltrationSignature | None = None,
    rank: int | None = None,
    max_factors: int | None = None,
) -> RootResult:
    """Bounded search for ``v^j = (product of relator conjugates) * u`` with u at ``target``.

    Products have at most ``max_factors`` (default ``conj_bound``) factors and
    conjugators of length at most ``conj_bound``; the smallest power wins.
    """
    sig = sig or FiltrationSignature((max(target.l - 1, 1),))
    target = target.normalize(sig)
    relators = list(relators)
    rank = rank or max([v.max_generator()] + [r.max_generator() for r in relators] + [1])
    system = SchreierSystem(rank)
    l = target.l
    max_factors = conj_bound if max_factors is None else max_factors
    conjugators = all_words(rank, conj_bound)
    pieces = []
    seen = set()
    for idx in range(len(relators)):
        for sign in (1, -1):
            for f in conjugators:
                w = conjugate(relators[idx] ** sign, f)
                if w.is_identity() or w in seen:
                    continue
                seen.add(w)
                pieces.append(((idx, sign, f), w))
    searched = 0
    for j in range(1, power_bound + 1):
        vj = v ** j
        if not system.in_kernel(vj):
            searched += 1
            continue
        # breadth-first over products with an increasing number of factors
        layer = [((), IDENTITY)]
        for nfac in range(0, max_factors + 1):
            nxt = []
            for facs, prod in layer:
                searched += 1
                residue = prod.inverse() * vj
                if in_level(residue, l, system):
                    return RootResult(True, j, list(facs), residue, searched)
                if nfac < max_factors:
                    for fac, w in pieces:
                        nxt.append((facs + (fac,), prod * w))
            layer = nxt
    return RootResult(False, searched=searched)


def verify_root(v: Word, result: RootResult, relators, target: LevelIndex, rank: int) -> bool:
    """Re-check a YES certificate by free reduction and a level test."""
    if not result.found:
        return False
    prod = relator_product(relators, result.factors)
    if prod * result.residue != v ** result.power:
        return False
    return in_level(result.residue, target.l, SchreierSystem(rank))


# commutative valuation on Z[Z^n] ------------------------------------------------


def commutative_valuation(a: QuotRingElement):
    """Augmentation-ideal depth of an element of ``Z[Z^n]`` (INF for zero)."""
    if a.is_zero():
        return INF
    keys = list(a.coefs)
    n = len(keys[0])
    lows = [min(k[i] for k in keys) for i in range(n)]
    # multiplying by a monomial is a unit and does not change the depth
    poly = {tuple(k[i] - lows[i] for i in range(n)): c for k, c in a.coefs.items()}
    top = max(sum(e) for e in poly)
    for deg in range(top + 1):
        for alpha in _compositions(deg, n):
            coef = 0
            for e, c in poly.items():
                term = c
                for ei, ai in zip(e, alpha):
                    if ai > ei:
                        term = 0
                        break
                    term *= comb(ei, ai)
                coef += term
            if coef:
                return deg
    raise AssertionError("nonzero Laurent polynomial with vanishing expansion")


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def trivial_valuation(a):
    return INF if a.is_zero() else 0


# the level-one quotient ring --------------------------------------------------


class LevelQuotient:
    """``F / gamma_l([F,F])`` with faithful coset keys.

    A word w is keyed by its abelianization vector together with the Magnus
    series, truncated at degree ``l - 1``, of ``(w bar)^-1 w`` rewritten over
    Schreier generators.
    """

    def __init__(self, rank: int, depth: int, system: SchreierSystem | None = None):
        if depth < 1:
            raise ValueError("depth must be at least one")
        self.rank = rank
        self.depth = depth
        self.system = system or SchreierSystem(rank)
        self.shadow_quotient = GammaQuotient(2, rank)
        self._cache: dict = {}

    def __eq__(self, other):
        return isinstance(other, LevelQuotient) and (self.rank, self.depth, self.system) == (
            other.rank,
            other.depth,
            other.system,
        )

    def __hash__(self):
        return hash(("level", self.rank, self.depth, id(self.system)))

    @property
    def name(self):
        return f"F/gamma{self.depth}(N)"

    def key(self, w: Word):
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        vec = self.system.vector(w)
        inner = sorted_normal_form(vec).inverse() * w
        zword = self.system.rewrite_in_schreier(inner)
        series = expand_word(zword, self.depth - 1)
        k = (vec, tuple(sorted(series.terms.items())))
        if len(self._cache) > 100_000:
            self._cache.clear()
        self._cache[w] = k
        return k

    def contains(self, w: Word) -> bool:
        return self.key(w) == self.key(IDENTITY)

    def canonical(self, key, rep):
        return rep

    def order(self, key, rep):
        return (sorted_normal_form(key[0]).sort_key(), len(rep), str(rep))

    def format_key(self, key, rep):
        return str(rep)

    def shadow(self, a: QuotRingElement) -> QuotRingElement:
        """Image in ``Z[F/[F,F]]``."""
        coefs: dict = {}
        reps: dict = {}
        for k, c in a.coefs.items():
            coefs[k[0]] = coefs.get(k[0], 0) + c
            reps.setdefault(k[0], sorted_normal_form(k[0]))
        return QuotRingElement(self.shadow_quotient, coefs, reps)

    def psi(self, a: QuotRingElement):
        """Minimum over cosets of the Schreier-variable depth; capped at ``depth``."""
        if a.is_zero():
            return INF
        per_coset: dict = {}
        for (vec, series), c in a.coefs.items():
            acc = per_coset.setdefault(vec, {})
            for m, x in series:
                acc[m] = acc.get(m, 0) + c * x
        best = self.depth
        for acc in per_coset.values():
            for m, x in acc.items():
                if x and len(m) < best:
                    best = len(m)
        return best


def level_psi(quotient):
    """ψ for a quotient ring: trivial on ``Z[F/[F,F]]``, filtration depth on level one."""
    if isinstance(quotient, LevelQuotient):
        return quotient.psi
    return trivial_valuation
