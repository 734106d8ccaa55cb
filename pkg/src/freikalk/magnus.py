"""Truncated Magnus expansion ``g_j -> 1 + t_j`` into noncommutative series.

Monomials are tuples of variable indices; the empty tuple is the constant
term.  Valuations beyond the truncation degree are reported as ``math.inf``
and serialized as ``">d"``.
"""
from __future__ import annotations

import math
from math import comb

from .errors import IdentityElement, InternalInconsistency, PreconditionFailed
from .fox import derive
from .ring import RingElement
from .words import IDENTITY, Word, commutator

INF = math.inf
DEFAULT_TRUNC = 8


def gen_binom(e: int, k: int) -> int:
    """Binomial coefficient ``C(e, k)`` for any integer ``e``."""
    if e >= 0:
        return comb(e, k)
    # C(-m, k) = (-1)^k C(m + k - 1, k)
    return (-1) ** k * comb(-e + k - 1, k)


class TruncSeries:
    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms=None):
        self.d = d
        self.terms = {m: c for m, c in (terms or {}).items() if c and len(m) <= d}

    @classmethod
    def one(cls, d):
        return cls(d, {(): 1})

    @classmethod
    def syllable(cls, g: int, e: int, d: int):
        return cls(d, {(g,) * k: gen_binom(e, k) for k in range(d + 1)})

    def __eq__(self, other):
        return isinstance(other, TruncSeries) and self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return TruncSeries(min(self.d, other.d), out)

    def __neg__(self):
        return TruncSeries(self.d, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n):
        return TruncSeries(self.d, {m: c * n for m, c in self.terms.items()})

    def by_degree(self):
        buckets: dict = {}
        for m, c in self.terms.items():
            buckets.setdefault(len(m), []).append((m, c))
        return buckets

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        d = min(self.d, other.d)
        left = self.by_degree()
        right = other.by_degree()
        out: dict = {}
        for da, ta in left.items():
            for db, tb in right.items():
                if da + db > d:
                    continue
                for ma, ca in ta:
                    for mb, cb in tb:
                        m = ma + mb
                        out[m] = out.get(m, 0) + ca * cb
        return TruncSeries(d, out)

    def valuation(self):
        return min((len(m) for m in self.terms), default=INF)

    def homogeneous(self, deg: int) -> dict:
        return {m: c for m, c in self.terms.items() if len(m) == deg}

    def items(self):
        return sorted(self.terms.items(), key=lambda mc: (len(mc[0]), mc[0]))

    def to_json(self):
        return [{"monomial": " ".join(f"t{i}" for i in m), "coef": c} for m, c in self.items()]

    def __str__(self):
        return format_series(self.terms)

    def __repr__(self):
        return f"TruncSeries(d={self.d}, {self})"


def format_monomial(m, var="t"):
    if not m:
        return "1"
    parts = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        parts.append(f"{var}{m[i]}" if j - i == 1 else f"{var}{m[i]}^{j - i}")
        i = j
    return "*".join(parts)


def format_series(terms, var="t"):
    items = sorted(terms.items(), key=lambda mc: (len(mc[0]), mc[0]))
    if not items:
        return "0"
    out = []
    for idx, (m, c) in enumerate(items):
        a = abs(c)
        mono = format_monomial(m, var)
        body = str(a) if not m else (mono if a == 1 else f"{a}*{mono}")
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(f" {'-' if c < 0 else '+'} {body}")
    return "".join(out)


class _SuffixCache:
    """Expansions of word suffixes; Fox derivatives are sums of suffixes."""

    def __init__(self, limit=200_000):
        self.limit = limit
        self.data: dict = {}

    def get(self, syllables, d):
        data = self.data
        if (syllables, d) in data:
            return data[(syllables, d)]
        n = len(syllables)
        i = n
        acc = TruncSeries.one(d)
        # longest cached suffix
        while i > 0:
            hit = data.get((syllables[i - 1 :], d))
            if hit is None:
                break
            acc = hit
            i -= 1
        for p in range(i - 1, -1, -1):
            g, e = syllables[p]
            acc = TruncSeries.syllable(g, e, d) * acc
            if len(data) >= self.limit:
                data.clear()
            data[(syllables[p:], d)] = acc
        return acc


_cache = _SuffixCache()


def expand_word(w: Word, d: int) -> TruncSeries:
    if d < 0:
        raise ValueError("truncation degree must be non-negative")
    if w.is_identity():
        return TruncSeries.one(d)
    return _cache.get(w.syllables, d)


def expand(a, d: int = DEFAULT_TRUNC) -> TruncSeries:
    """Magnus image of a word or group ring element, exact through degree ``d``."""
    if isinstance(a, Word):
        return expand_word(a, d)
    a = RingElement.coerce(a)
    out: dict = {}
    for w, c in a.terms.items():
        for m, x in expand_word(w, d).terms.items():
            out[m] = out.get(m, 0) + c * x
    return TruncSeries(d, out)


def ideal_valuation(a, d: int = DEFAULT_TRUNC):
    """Largest n with ``a`` in the n-th power of the augmentation ideal, or INF past ``d``."""
    return expand(a, d).valuation()


def format_valuation(v, d):
    return f">{d}" if v == INF else str(v)


def lcs_class(v: Word, d: int = DEFAULT_TRUNC):
    """Lower central class of ``v``: both the direct and the derivative route must agree."""
    if v.is_identity():
        raise IdentityElement("the identity has no lower central class")
    direct = ideal_valuation(RingElement.word_minus_one(v), d)
    via = derivative_class(v, d)
    if direct != via:
        raise InternalInconsistency(
            f"class of {v}: direct {format_valuation(direct, d)} vs derivatives {format_valuation(via, d)}"
        )
    return direct


def derivative_class(v: Word, d: int = DEFAULT_TRUNC):
    """Class as ``1 + min_j val(D_j v)`` with derivatives expanded one degree lower."""
    gens = sorted(v.generators())
    best = min((ideal_valuation(derive(v, j), d - 1) for j in gens), default=INF)
    return best + 1


def depth_step(v: Word, j: int, d: int = DEFAULT_TRUNC, x: int = 2, k: int = 1) -> bool:
    """Commutating with ``g_x`` raises the valuation of ``D_k`` by exactly one.

    Requires ``val(D_k v) = j - 1``; returns whether ``D_k([v, g_x])`` stays
    outside the ``j+1``-st ideal power, i.e. has valuation at most ``j``.
    """
    dv = ideal_valuation(derive(v, k), d)
    if dv != j - 1:
        raise PreconditionFailed(
            f"valuation of D_{k}({v}) is {format_valuation(dv, d)}, expected {j - 1}"
        )
    if j + 1 > d:
        raise PreconditionFailed(f"truncation {d} too small for j={j}")
    dw = ideal_valuation(derive(commutator(v, Word.gen(x)), k), d)
    return dw <= j


# basic commutators ----------------------------------------------------------


class BasicCommutator:
    __slots__ = ("word", "weight", "left", "right", "index", "label")

    def __init__(self, word, weight, left, right, index, label):
        self.word = word
        self.weight = weight
        self.left = left
        self.right = right
        self.index = index
        self.label = label

    def __repr__(self):
        return f"BasicCommutator({self.label}, weight={self.weight})"


def basic_commutators(rank: int, max_weight: int) -> list:
    """Hall basic commutators of weight <= max_weight, in Hall order."""
    out: list = []
    for g in range(1, rank + 1):
        out.append(BasicCommutator(Word.gen(g), 1, None, None, len(out), f"y{g}"))
    for n in range(2, max_weight + 1):
        fresh = []
        for ci in out:
            for cj in out:
                if ci.index <= cj.index or ci.weight + cj.weight != n:
                    continue
                if ci.right is not None and ci.right.index > cj.index:
                    continue
                fresh.append((ci, cj))
        for ci, cj in fresh:
            out.append(
                BasicCommutator(
                    commutator(ci.word, cj.word), n, ci, cj, len(out), f"[{ci.label},{cj.label}]"
                )
            )
    return out


def weight_of(v: Word, d: int = DEFAULT_TRUNC):
    return INF if v == IDENTITY else lcs_class(v, d)
