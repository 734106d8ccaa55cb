"""Fox derivatives with the right-handed product rule.

The derivations satisfy ``D(uv) = D(u) v + eps(u) D(v)`` and ``D_j(g_k) = [j == k]``.
For a word ``a_1 ... a_L`` this gives

    D_k(w) = sum over a_i = g_k of a_{i+1}...a_L  -  sum over a_i = g_k^-1 of a_i...a_L

so every term is a suffix of the word.  The fundamental identity then reads
``u - eps(u) = sum_j (g_j - 1) D_j(u)``.
"""
from __future__ import annotations

from functools import lru_cache

from .errors import InternalInconsistency, InvalidGenerator, NotInVerbal
from .ring import RingElement, coset_map
from .words import SubgroupBasis, Word, _concat, conjugate


@lru_cache(maxsize=1 << 16)
def _derive_word(syllables, k):
    out: dict = {}
    suffix = ()
    # walk right to left, growing the suffix one letter at a time
    for g, e in reversed(syllables):
        step = 1 if e > 0 else -1
        for _ in range(abs(e)):
            if g == k and step > 0:
                w = Word(suffix)
                out[w] = out.get(w, 0) + 1
            suffix = _concat(((g, step),), suffix)
            if g == k and step < 0:
                w = Word(suffix)
                out[w] = out.get(w, 0) - 1
    return RingElement(out)


def derive(u, k: int, rank: int | None = None) -> RingElement:
    """``D_k(u)`` for a word or group ring element ``u``."""
    if k < 1 or (rank is not None and k > rank):
        raise InvalidGenerator(f"derivative index {k} outside 1..{rank}")
    if isinstance(u, Word):
        return _derive_word(u.syllables, k)
    u = RingElement.coerce(u)
    out = RingElement()
    for w, c in u.terms.items():
        out = out + _derive_word(w.syllables, k) * c
    return out


def derivative_vector(u, rank: int) -> list:
    return [derive(u, k, rank) for k in range(1, rank + 1)]


def fundamental_decomposition(u, rank: int) -> list:
    """Derivatives ``(D_1 u, ..., D_n u)``, verified against ``u - eps(u)``."""
    u = RingElement.coerce(u).check_rank(rank)
    vec = derivative_vector(u, rank)
    total = RingElement()
    for j, d in enumerate(vec, start=1):
        total = total + RingElement.word_minus_one(Word.gen(j)) * d
    if total != u - u.augmentation():
        raise InternalInconsistency(f"fundamental identity failed for {u}")
    return vec


def conjugation_congruence_check(r: Word, f: Word, k: int, quotient) -> bool:
    """Does ``D_k(r^f) - D_k(r) f`` vanish in ``Z[F/N]``?  Requires ``r`` in N."""
    if hasattr(quotient, "contains") and not quotient.contains(r):
        raise NotInVerbal(f"{r} is not in {getattr(quotient, 'name', quotient)}")
    diff = derive(conjugate(r, f), k) - derive(r, k) * f
    return coset_map(diff, quotient).is_zero()


def subgroup_derivative(basis_word: Word, k: int, basis) -> RingElement:
    """Derivative with respect to the k-th basis element, spelled out in F."""
    d = derive(basis_word, k)
    out = RingElement()
    for w, c in d.terms.items():
        out = out + RingElement({w.substitute(lambda i: basis[i - 1]): c})
    return out


def chain_rule_check(v: Word, basis, j: int, basis_word: Word | None = None) -> bool:
    """Compare ``D_j(v)`` with ``sum_k D_j(x_k) d_k(v)`` over a free basis ``x_k``.

    ``basis_word`` spells ``v`` in the basis symbols; if omitted it is found
    by folding, which raises NotInSubgroup for non-members.
    """
    basis = list(basis)
    if basis_word is None:
        basis_word = SubgroupBasis(basis).express(v)
    spelled = basis_word.substitute(lambda i: basis[i - 1])
    if spelled != v:
        raise InternalInconsistency(f"basis word spells {spelled}, expected {v}")
    lhs = derive(v, j)
    rhs = RingElement()
    for k in sorted(basis_word.generators()):
        rhs = rhs + derive(basis[k - 1], j) * subgroup_derivative(basis_word, k, basis)
    return lhs == rhs

