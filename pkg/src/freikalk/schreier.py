"""Schreier transversal for ``F / [F, F]`` and Reidemeister-Schreier rewriting.

The transversal is the exponent-sorted normal form ``y1^a1 ... yn^an``; it is
prefix closed, and cosets meeting ``H = <y_k : k in K>`` are represented by
elements of H.  Schreier generators ``s g_j (s g_j)bar^-1`` get integer ids
in first-use order.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidGenerator, NotInKernel, UnsupportedQuotient
from .fox import derive
from .ring import GammaQuotient, RingElement, sorted_normal_form
from .words import IDENTITY, Word


@dataclass(frozen=True)
class CosetClass:
    kind: str  # "alpha" or "beta"
    representative: Word


@dataclass(frozen=True)
class SchreierGenerator:
    id: int
    s: Word
    j: int
    word: Word

    def to_json(self):
        return {"z": self.id, "s": str(self.s), "j": self.j, "word": str(self.word)}


class SchreierSystem:
    def __init__(self, rank: int, K=(), c: int = 2):
        if c != 2:
            raise UnsupportedQuotient("Schreier transversals are implemented for gamma2 only")
        self.rank = rank
        self.K = frozenset(K)
        for k in self.K:
            if not 1 <= k <= rank:
                raise InvalidGenerator(f"subgroup index {k} outside 1..{rank}")
        self.quotient = GammaQuotient(2, rank)
        self._table: dict = {}  # (exponent vector of s, j) -> id, 0 for trivial
        self.generators: list = []

    # transversal -------------------------------------------------------------

    def vector(self, u: Word):
        return self.quotient.key(u)

    def representative(self, u: Word) -> Word:
        return sorted_normal_form(self.vector(u))

    def in_kernel(self, u: Word) -> bool:
        return not any(self.vector(u))

    def is_alpha_vector(self, vec) -> bool:
        return all(e == 0 for i, e in enumerate(vec, start=1) if i not in self.K)

    def classify(self, u: Word) -> CosetClass:
        vec = self.vector(u)
        return CosetClass("alpha" if self.is_alpha_vector(vec) else "beta", sorted_normal_form(vec))

    # generators --------------------------------------------------------------

    def _gen_id(self, vec, j):
        key = (vec, j)
        z = self._table.get(key)
        if z is None:
            s = sorted_normal_form(vec)
            nxt = list(vec)
            nxt[j - 1] += 1
            word = s * Word.gen(j) * sorted_normal_form(nxt).inverse()
            if word.is_identity():
                z = 0
            else:
                z = len(self.generators) + 1
                self.generators.append(SchreierGenerator(z, s, j, word))
            self._table[key] = z
        return z

    def schreier_generator(self, s: Word, j: int):
        """The word ``s g_j (s g_j)bar^-1``, or None when it is trivial."""
        if not 1 <= j <= self.rank:
            raise InvalidGenerator(f"generator index {j} outside 1..{self.rank}")
        vec = self.vector(s)
        if sorted_normal_form(vec) != s:
            raise ValueError(f"{s} is not a transversal element")
        z = self._gen_id(vec, j)
        return None if z == 0 else self.generators[z - 1].word

    def generator_id(self, s: Word, j: int) -> int:
        """Stable id of the generator defined by ``(s, j)``; 0 if trivial."""
        return self._gen_id(self.vector(s), j)

    def generator(self, z: int) -> SchreierGenerator:
        return self.generators[z - 1]

    def is_alpha_generator(self, z: int) -> bool:
        g = self.generators[z - 1]
        return g.j in self.K and self.is_alpha_vector(self.vector(g.s))

    def alpha_ids(self, ids) -> set:
        return {z for z in ids if self.is_alpha_generator(z)}

    # rewriting ---------------------------------------------------------------

    def rewrite_in_schreier(self, v: Word) -> Word:
        """Spell ``v`` (which must lie in the kernel) over Schreier generator ids."""
        if v.max_generator() > self.rank:
            raise InvalidGenerator(f"{v} uses generators beyond rank {self.rank}")
        if not self.in_kernel(v):
            raise NotInKernel(f"{v} is not in the commutator subgroup")
        vec = [0] * self.rank
        out = []
        for a in v.letters():
            j = abs(a)
            if a > 0:
                z = self._gen_id(tuple(vec), j)
                vec[j - 1] += 1
                if z:
                    out.append(z)
            else:
                vec[j - 1] -= 1
                z = self._gen_id(tuple(vec), j)
                if z:
                    out.append(-z)
        return Word.from_letters(out)

    def spell(self, zword: Word) -> Word:
        return zword.substitute(lambda z: self.generators[z - 1].word)

    def schreier_derivative(self, v: Word, z: int, zword: Word | None = None) -> RingElement:
        """``d_z(v)`` taken in the free group on Schreier generators, spelled in F."""
        if zword is None:
            zword = self.rewrite_in_schreier(v)
        d = derive(zword, z)
        return d.substitute(lambda i: self.generators[i - 1].word)

    # derivative decomposition ------------------------------------------------

    def coset_decompose(self, v: Word, j: int) -> list:
        """Split ``D_j(v)`` by coset.

        Returns ``(z, tag, component, predicted)`` for every generator ``z``
        with defining letter ``j`` that occurs in ``v``; ``tag`` is the
        transversal element of the coset of ``(s g_j)bar^-1``, ``component`` is
        the part of ``D_j(v)`` in that coset and ``predicted`` is
        ``(s g_j)bar^-1 * d_z(v)``.  The final entry has ``z = None`` and
        carries the residual ``D_j(v) - sum(predicted)``.
        """
        zword = self.rewrite_in_schreier(v)
        dj = derive(v, j)
        by_coset: dict = {}
        for w, c in dj.terms.items():
            by_coset.setdefault(self.vector(w), {})[w] = c
        out = []
        residual = dj
        for z in sorted(zword.generators()):
            g = self.generators[z - 1]
            if g.j != j:
                continue
            ubar_inv = sorted_normal_form(self._next_vector(g.s, j)).inverse()
            tag_vec = self.vector(ubar_inv)
            component = RingElement(by_coset.get(tag_vec, {}))
            predicted = ubar_inv * self.schreier_derivative(v, z, zword)
            residual = residual - predicted
            out.append((z, sorted_normal_form(tag_vec), component, predicted))
        out.append((None, None, residual, None))
        return out

    def _next_vector(self, s: Word, j: int):
        vec = list(self.vector(s))
        vec[j - 1] += 1
        return tuple(vec)

    def coset_decomposition_check(self, v: Word, j: int) -> bool:
        parts = self.coset_decompose(v, j)
        residual = parts[-1][2]
        tags = {self.vector(t) for _, t, _, _ in parts[:-1]}
        for _, _, component, predicted in parts[:-1]:
            if component != predicted:
                return False
        return all(self.vector(w) not in tags for w in residual.terms)

    def table_json(self):
        return [g.to_json() for g in self.generators]


def is_prefix_closed(words) -> bool:
    """Every prefix of every word (cut at letter boundaries) is also in the set."""
    pool = set(words)
    for w in pool:
        letters = list(w.letters())
        for i in range(len(letters)):
            if Word.from_letters(letters[:i]) not in pool:
                return False
    return True


def transversal_ball(rank: int, radius: int) -> list:
    """All sorted normal forms with exponents in ``[-radius, radius]``."""
    vecs = [()]
    for _ in range(rank):
        vecs = [v + (e,) for v in vecs for e in range(-radius, radius + 1)]
    return [sorted_normal_form(v) for v in vecs] or [IDENTITY]
