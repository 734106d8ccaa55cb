"""Reduced words in a free group of finite rank.

A word is stored as a tuple of syllables ``(generator, exponent)`` with
adjacent generators distinct and no zero exponents.  Words do not carry
their rank; a :class:`FreeGroup` context validates generator indices.
"""
from __future__ import annotations

import random

from .errors import InvalidGenerator, NotFreeBasis, NotInSubgroup, RankMismatch

SEED_MAX = 2**64


def _concat(a, b):
    # a and b are reduced; only the junction can cancel
    i, j = len(a), 0
    while i > 0 and j < len(b) and a[i - 1][0] == b[j][0]:
        e = a[i - 1][1] + b[j][1]
        if e:
            return a[: i - 1] + ((a[i - 1][0], e),) + b[j + 1 :]
        i -= 1
        j += 1
    return a[:i] + b[j:]


def reduce_syllables(raw):
    """Freely reduce an arbitrary iterable of ``(gen, exp)`` pairs."""
    out = []
    for g, e in raw:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out[-1][1]
            out.pop()
            if e:
                out.append((g, e))
        else:
            out.append((g, e))
    return tuple(out)


class Word:
    __slots__ = ("syllables", "_hash", "_len")

    def __init__(self, syllables=()):
        self.syllables = tuple(syllables)
        self._hash = None
        self._len = None

    @classmethod
    def from_raw(cls, raw):
        return cls(reduce_syllables(raw))

    @classmethod
    def from_letters(cls, letters):
        return cls(reduce_syllables((abs(a), 1 if a > 0 else -1) for a in letters))

    @classmethod
    def gen(cls, j, e=1):
        return cls(((j, e),) if e else ())

    def __len__(self):
        if self._len is None:
            self._len = sum(abs(e) for _, e in self.syllables)
        return self._len

    def __bool__(self):
        return bool(self.syllables)

    def is_identity(self):
        return not self.syllables

    def __eq__(self, other):
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.syllables)
        return self._hash

    def sort_key(self):
        return (len(self), self.syllables)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __mul__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return Word(_concat(self.syllables, other.syllables))

    def inverse(self):
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = Word(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def letters(self):
        for g, e in self.syllables:
            s = g if e > 0 else -g
            for _ in range(abs(e)):
                yield s

    def generators(self):
        return {g for g, _ in self.syllables}

    def max_generator(self):
        return max((g for g, _ in self.syllables), default=0)

    def exponent_sums(self, rank):
        v = [0] * rank
        for g, e in self.syllables:
            v[g - 1] += e
        return tuple(v)

    def substitute(self, images):
        """Image under the homomorphism ``g_j -> images[j]`` (a dict or callable)."""
        get = images if callable(images) else images.__getitem__
        out = Word()
        for g, e in self.syllables:
            out = out * (get(g) ** e)
        return out

    def __repr__(self):
        return f"Word({format_word(self)!r})"

    def __str__(self):
        return format_word(self)


IDENTITY = Word()


def format_word(w, letter="y"):
    if not w.syllables:
        return "1"
    parts = []
    for g, e in w.syllables:
        parts.append(f"{letter}{g}" if e == 1 else f"{letter}{g}^{e}")
    return "*".join(parts)


def commutator(a, b):
    """``[a, b] = a^-1 b^-1 a b``."""
    return a.inverse() * b.inverse() * a * b


def conjugate(a, f):
    """``a^f = f^-1 a f``."""
    return f.inverse() * a * f


def left_normed(words):
    """``[w1, w2, ..., wk]`` nested to the left; a single word is returned as is."""
    it = iter(words)
    acc = next(it)
    for w in it:
        acc = commutator(acc, w)
    return acc


def cyclic_reduce(w):
    """Return ``(core, conjugator)`` with ``w = conjugator^-1 * core * conjugator``."""
    letters = list(w.letters())
    i, n = 0, len(letters)
    while n - 2 * i >= 2 and letters[i] == -letters[n - 1 - i]:
        i += 1
    core = Word.from_letters(letters[i : n - i])
    prefix = Word.from_letters(letters[:i])
    return core, prefix.inverse()


class FreeGroup:
    """Rank context for words: validation, products and sampling."""

    def __init__(self, rank):
        if rank < 1:
            raise InvalidGenerator(f"rank must be positive, got {rank}")
        self.rank = rank

    def __repr__(self):
        return f"FreeGroup({self.rank})"

    def __eq__(self, other):
        return isinstance(other, FreeGroup) and other.rank == self.rank

    def __hash__(self):
        return hash(("FreeGroup", self.rank))

    @property
    def generators(self):
        return [Word.gen(j) for j in range(1, self.rank + 1)]

    def gen(self, j, e=1):
        if not 1 <= j <= self.rank:
            raise InvalidGenerator(f"generator index {j} outside 1..{self.rank}")
        return Word.gen(j, e)

    def reduce(self, raw):
        raw = list(raw)
        for g, _ in raw:
            if not 1 <= g <= self.rank:
                raise InvalidGenerator(f"generator index {g} outside 1..{self.rank}")
        return Word.from_raw(raw)

    def check(self, *words):
        for w in words:
            m = w.max_generator()
            if m > self.rank:
                raise RankMismatch(f"word uses y{m} but rank is {self.rank}")
        return words[0] if len(words) == 1 else words

    def commutator(self, a, b):
        self.check(a, b)
        return commutator(a, b)

    def conjugate(self, a, f):
        self.check(a, f)
        return conjugate(a, f)

    def cyclic_reduce(self, w):
        self.check(w)
        return cyclic_reduce(w)

    def sample_word(self, max_len, seed):
        """Deterministic pseudorandom reduced word of length at most ``max_len``.

        ``seed`` is either an integer in ``[0, 2**64)`` or a ``random.Random``.
        """
        rng = _rng(seed)
        length = rng.randint(0, max_len) if max_len > 0 else 0
        letters = []
        for _ in range(length):
            while True:
                a = rng.randint(1, self.rank) * rng.choice((1, -1))
                if not letters or a != -letters[-1]:
                    break
            letters.append(a)
        return Word.from_letters(letters)

    def parse(self, text):
        from .grammar import parse_word

        w = parse_word(text)
        return self.check(w)


def _rng(seed):
    if isinstance(seed, random.Random):
        return seed
    if not 0 <= seed < SEED_MAX:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return random.Random(seed)


def all_words(rank, max_len):
    """Every reduced word of length <= max_len, in (length, syllable) order."""
    out = [IDENTITY]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for letters in frontier:
            for g in range(1, rank + 1):
                for s in (g, -g):
                    if letters and letters[-1] == -s:
                        continue
                    nxt.append(letters + (s,))
        out.extend(Word.from_letters(x) for x in nxt)
        frontier = nxt
    out.sort(key=Word.sort_key)
    return out


class SubgroupBasis:
    """A finite free basis of a subgroup of F, with membership by Stallings folding.

    Every edge of the folded graph carries a word over the basis symbols
    ``1..k``.  Reading a closed path at the base vertex multiplies these labels
    and yields the element's spelling in the given basis.
    """

    def __init__(self, basis):
        self.basis = list(basis)
        if any(b.is_identity() for b in self.basis):
            raise NotFreeBasis("identity cannot be a basis element")
        self._adj = {0: []}
        nxt = 1
        for k, b in enumerate(self.basis, start=1):
            letters = list(b.letters())
            v = 0
            for idx, a in enumerate(letters):
                if idx == len(letters) - 1:
                    q = 0
                else:
                    q = nxt
                    nxt += 1
                    self._adj[q] = []
                self._link(v, a, q, Word.gen(k) if idx == 0 else IDENTITY)
                v = q
        self._fold()
        self._out = {v: {a: (q, lam) for a, q, lam in edges} for v, edges in self._adj.items()}

    @property
    def rank(self):
        return len(self.basis)

    def spell(self, basis_word):
        """Ambient word of an element given as a word over basis symbols."""
        return basis_word.substitute(lambda k: self.basis[k - 1])

    def contains(self, w):
        try:
            self.express(w)
        except NotInSubgroup:
            return False
        return True

    def express(self, w):
        """Word over basis symbols whose spelling is ``w``; raises NotInSubgroup."""
        v = 0
        lam = IDENTITY
        for a in w.letters():
            edge = self._out[v].get(a)
            if edge is None:
                raise NotInSubgroup(f"{w} is not in the subgroup")
            v, label = edge
            lam = lam * label
        if v != 0:
            raise NotInSubgroup(f"{w} is not in the subgroup")
        return lam

    def _link(self, p, a, q, lam):
        self._adj[p].append((a, q, lam))
        self._adj[q].append((-a, p, lam.inverse()))

    def _unlink(self, p, a, q, lam):
        self._adj[p].remove((a, q, lam))
        self._adj[q].remove((-a, p, lam.inverse()))

    def _find_fold(self):
        for v, edges in self._adj.items():
            seen = {}
            for e in edges:
                if e[0] in seen:
                    return v, seen[e[0]], e
                seen[e[0]] = e
        return None

    def _fold(self):
        while True:
            hit = self._find_fold()
            if hit is None:
                return
            v, (a, q1, l1), (_, q2, l2) = hit
            if q1 == q2:
                if l1 != l2:
                    raise NotFreeBasis("basis elements satisfy a nontrivial relation")
                self._unlink(v, a, q2, l2)
                continue
            if q1 == 0:
                q1, l1, q2, l2 = q2, l2, q1, l1
            # merge q1 into q2; incoming labels gain c^-1 on the right, outgoing gain c on the left
            self._merge(q1, q2, l2.inverse() * l1)

    def _merge(self, src, dst, c):
        cinv = c.inverse()
        new = []
        while self._adj[src]:
            a, r, mu = self._adj[src][0]
            self._unlink(src, a, r, mu)
            if r == src:
                new.append((dst, a, dst, c * mu * cinv))
            else:
                new.append((dst, a, r, c * mu))
        del self._adj[src]
        for p, a, q, lam in new:
            self._link(p, a, q, lam)
