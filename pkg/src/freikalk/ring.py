"""Sparse arithmetic in the integral group ring of a free group and its quotients."""
from __future__ import annotations

from .errors import RankMismatch, UnsupportedQuotient
from .grammar import format_ring, parse_ring
from .words import IDENTITY, Word, _concat


class RingElement:
    """Finite integer combination of reduced words; the empty map is zero."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif isinstance(terms, Word):
            terms = {terms: 1}
        self.terms = {w: c for w, c in terms.items() if c}
        self._hash = None

    @classmethod
    def one(cls):
        return cls({IDENTITY: 1})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def scalar(cls, n):
        return cls({IDENTITY: n})

    @classmethod
    def word_minus_one(cls, w):
        """``w - 1``."""
        return cls({w: 1}) - cls.one()

    @classmethod
    def parse(cls, text):
        return cls(parse_ring(text))

    @staticmethod
    def coerce(x):
        if isinstance(x, RingElement):
            return x
        if isinstance(x, Word):
            return RingElement({x: 1})
        if isinstance(x, int):
            return RingElement.scalar(x)
        raise TypeError(f"cannot use {type(x).__name__} as a group ring element")

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Word)):
            other = RingElement.coerce(other)
        return isinstance(other, RingElement) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        other = RingElement.coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return RingElement(out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-RingElement.coerce(other))

    def __rsub__(self, other):
        return RingElement.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement({w: c * other for w, c in self.terms.items()})
        other = RingElement.coerce(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            s1 = w1.syllables
            for w2, c2 in other.terms.items():
                w = Word(_concat(s1, w2.syllables))
                out[w] = out.get(w, 0) + c1 * c2
        return RingElement(out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return RingElement.coerce(other) * self

    def __pow__(self, n):
        out = RingElement.one()
        for _ in range(n):
            out = out * self
        return out

    def augmentation(self):
        return sum(self.terms.values())

    def support(self):
        return sorted(self.terms, key=Word.sort_key)

    def items(self):
        return [(w, self.terms[w]) for w in self.support()]

    def max_generator(self):
        return max((w.max_generator() for w in self.terms), default=0)

    def check_rank(self, rank):
        m = self.max_generator()
        if m > rank:
            raise RankMismatch(f"element uses y{m} but rank is {rank}")
        return self

    def substitute(self, images):
        out = RingElement()
        for w, c in self.terms.items():
            out = out + RingElement({w.substitute(images): c})
        return out

    def to_json(self):
        return [{"word": str(w), "coef": c} for w, c in self.items()]

    def __str__(self):
        return format_ring(self.terms)

    def __repr__(self):
        return f"RingElement({str(self)!r})"


def augmentation(a):
    return RingElement.coerce(a).augmentation()


def power_difference_normalize(a: Word, n: int, class_bound: int = 1) -> RingElement:
    """``n(a-1) - (a^n - 1)``; lies deep in the filtration when ``a`` does.

    ``class_bound`` is informational: the caller asserts ``a`` sits in the layer
    whose square is the target ideal.
    """
    return RingElement.word_minus_one(a) * n - RingElement.word_minus_one(a ** n)


# quotient rings ------------------------------------------------------------


class GammaQuotient:
    """``F / gamma_c F`` for a free group of given rank.

    Group elements are keyed by their Magnus series truncated at degree
    ``c - 1``, which is a complete invariant of the coset.  For ``c = 2`` the
    key is the exponent-sum vector.
    """

    def __init__(self, c: int, rank: int):
        if c < 2:
            raise UnsupportedQuotient(f"only gamma_c with c >= 2 is supported, got c={c}")
        self.c = c
        self.rank = rank

    def __eq__(self, other):
        return isinstance(other, GammaQuotient) and (self.c, self.rank) == (other.c, other.rank)

    def __hash__(self):
        return hash(("gamma", self.c, self.rank))

    def __repr__(self):
        return f"GammaQuotient(c={self.c}, rank={self.rank})"

    @property
    def name(self):
        return f"gamma{self.c}"

    def key(self, w: Word):
        m = w.max_generator()
        if m > self.rank:
            raise RankMismatch(f"word uses y{m} but rank is {self.rank}")
        if self.c == 2:
            return w.exponent_sums(self.rank)
        from .magnus import expand_word

        s = expand_word(w, self.c - 1)
        return tuple(sorted(s.terms.items()))

    def contains(self, w: Word) -> bool:
        """Is ``w`` in the kernel ``gamma_c F``?"""
        return self.key(w) == self.key(IDENTITY)

    def canonical(self, key, rep):
        if self.c == 2:
            return sorted_normal_form(key)
        return rep

    def order(self, key, rep):
        if self.c == 2:
            return sorted_normal_form(key).sort_key()
        return (len(rep), str(rep))

    def format_key(self, key, rep):
        if self.c == 2:
            return str(sorted_normal_form(key))
        return str(rep)


def sorted_normal_form(exps) -> Word:
    return Word(tuple((j + 1, e) for j, e in enumerate(exps) if e))


def parse_quotient(text: str, rank: int):
    t = text.strip().lower().replace("_", "")
    if t.startswith("gamma"):
        try:
            c = int(t[5:])
        except ValueError:
            raise UnsupportedQuotient(f"cannot read quotient {text!r}") from None
        return GammaQuotient(c, rank)
    raise UnsupportedQuotient(f"unsupported quotient {text!r}")


class QuotRingElement:
    """Element of ``Z[F/N]``: coefficients indexed by coset keys.

    A representative word is kept per key so that products can be formed in F
    and re-keyed; the result does not depend on which representative is kept.
    """

    __slots__ = ("quotient", "coefs", "reps")

    def __init__(self, quotient, coefs=None, reps=None):
        self.quotient = quotient
        self.coefs = {k: c for k, c in (coefs or {}).items() if c}
        reps = reps or {}
        self.reps = {k: reps[k] for k in self.coefs}

    @classmethod
    def from_ring(cls, a, quotient):
        coefs: dict = {}
        reps: dict = {}
        for w, c in RingElement.coerce(a).terms.items():
            k = quotient.key(w)
            coefs[k] = coefs.get(k, 0) + c
            if k not in reps or w.sort_key() < reps[k].sort_key():
                reps[k] = w
        return cls(quotient, coefs, reps)

    @classmethod
    def from_word(cls, w, quotient, coef=1):
        return cls(quotient, {quotient.key(w): coef}, {quotient.key(w): w})

    @classmethod
    def scalar(cls, n, quotient):
        return cls.from_word(IDENTITY, quotient, n)

    def _same(self, other):
        if isinstance(other, int):
            return QuotRingElement.scalar(other, self.quotient)
        if isinstance(other, (Word, RingElement)):
            return QuotRingElement.from_ring(other, self.quotient)
        if other.quotient != self.quotient:
            raise RankMismatch("elements of different quotient rings")
        return other

    def is_zero(self):
        return not self.coefs

    def __bool__(self):
        return bool(self.coefs)

    def __eq__(self, other):
        if isinstance(other, (int, Word, RingElement)):
            other = self._same(other)
        return (
            isinstance(other, QuotRingElement)
            and other.quotient == self.quotient
            and other.coefs == self.coefs
        )

    def __hash__(self):
        return hash(frozenset(self.coefs.items()))

    def __add__(self, other):
        other = self._same(other)
        coefs = dict(self.coefs)
        reps = dict(self.reps)
        for k, c in other.coefs.items():
            coefs[k] = coefs.get(k, 0) + c
            reps.setdefault(k, other.reps[k])
        return QuotRingElement(self.quotient, coefs, reps)

    __radd__ = __add__

    def __neg__(self):
        return QuotRingElement(self.quotient, {k: -c for k, c in self.coefs.items()}, self.reps)

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return QuotRingElement(
                self.quotient, {k: c * other for k, c in self.coefs.items()}, self.reps
            )
        other = self._same(other)
        q = self.quotient
        coefs: dict = {}
        reps: dict = {}
        for k1, c1 in self.coefs.items():
            r1 = self.reps[k1]
            for k2, c2 in other.coefs.items():
                w = r1 * other.reps[k2]
                k = q.key(w)
                coefs[k] = coefs.get(k, 0) + c1 * c2
                reps.setdefault(k, w)
        return QuotRingElement(q, coefs, reps)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return self._same(other) * self

    def augmentation(self):
        return sum(self.coefs.values())

    def is_unit_monomial(self):
        """True for ``±g`` with g a group element; these are the units we invert."""
        return len(self.coefs) == 1 and abs(next(iter(self.coefs.values()))) == 1

    def inverse(self):
        if not self.is_unit_monomial():
            raise ValueError("only signed group elements are invertible here")
        (k, c), = self.coefs.items()
        return QuotRingElement.from_word(self.reps[k].inverse(), self.quotient, c)

    def lift(self) -> RingElement:
        """A preimage in Z[F] built from canonical representatives where available."""
        out = {}
        for k, c in self.coefs.items():
            w = self.quotient.canonical(k, self.reps[k])
            out[w] = out.get(w, 0) + c
        return RingElement(out)

    def commutes_with(self, other):
        other = self._same(other)
        return self * other == other * self

    def _text_terms(self):
        rows = []
        for k, c in self.coefs.items():
            rows.append((self.quotient.format_key(k, self.reps[k]), c, k))
        order = getattr(self.quotient, "order", None)
        if order is None:
            rows.sort(key=lambda r: (r[0] != "1", len(r[0]), r[0]))
        else:
            rows.sort(key=lambda r: order(r[2], self.reps[r[2]]))
        return rows

    def __str__(self):
        if not self.coefs:
            return "0"
        parts = []
        for idx, (text, c, _) in enumerate(self._text_terms()):
            a = abs(c)
            body = str(a) if text == "1" else (text if a == 1 else f"{a}*{text}")
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(f" {'-' if c < 0 else '+'} {body}")
        return "".join(parts)

    def __repr__(self):
        return f"QuotRingElement({str(self)!r})"

    def to_json(self):
        return [{"coset": text, "coef": c} for text, c, _ in self._text_terms()]


def coset_map(a, quotient) -> QuotRingElement:
    """Image of ``a`` in ``Z[F/N]``; zero exactly when ``a`` lies in ``Z[F](N-1)``."""
    if not hasattr(quotient, "key"):
        raise UnsupportedQuotient(f"unsupported quotient {quotient!r}")
    return QuotRingElement.from_ring(a, quotient)
