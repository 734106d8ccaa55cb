"""Freedom tests for one-relator quotients modulo the commutator-subgroup series.

With ``H = <y_1..y_{n-1}>`` and a relator r at level i of the series
``N_{1,l} = gamma_l([F,F])``, the relator closure meets H no deeper than the
series exactly when no conjugate of r lies in ``H * N_{1,i+1}``.  That
condition is semi-decided here:

* a sound refutation: if ``D_n(r)`` has depth below i in ``Z[F] * (N-1)^i``
  then, since ``D_n(r^f) = D_n(r) f`` modulo that ideal and ``D_n`` kills H,
  no conjugate can land in ``H * N_{1,i+1}``;
* a bounded search for a conjugator, certified by the relative criterion on
  Schreier generators and re-checked by free reduction.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    Inconclusive,
    InternalInconsistency,
    NotInVerbal,
    RankTooSmall,
)
from .filtration import (
    FiltrationSignature,
    LevelIndex,
    LevelQuotient,
    in_level,
    level_class,
    locate_level,
    relator_product,
)
from .fox import derive
from .magnus import DEFAULT_TRUNC, INF, ideal_valuation, depth_step
from .ring import RingElement, coset_map
from .schreier import SchreierSystem
from .words import IDENTITY, Word, commutator, conjugate, cyclic_reduce


@dataclass
class Bounds:
    conj: int = 3  # largest |e| in the conjugator search y_n^e
    samples: int = 10_000
    conj_len: int = 3
    factors: int = 3
    seed: int = 0
    trunc: int = DEFAULT_TRUNC

    def to_json(self):
        return {
            "conj": self.conj,
            "samples": self.samples,
            "conj_len": self.conj_len,
            "factors": self.factors,
            "seed": self.seed,
            "trunc": self.trunc,
        }


# criteria -------------------------------------------------------------------------


def derivative_residues(v: Word, K, quotient) -> dict:
    """Images of ``D_k(v)`` in ``Z[F/N]`` for every k outside K."""
    K = set(K)
    return {k: coset_map(derive(v, k), quotient) for k in range(1, quotient.rank + 1) if k not in K}


def derivative_criterion(v: Word, K, quotient) -> bool:
    """All derivatives outside K vanish modulo ``Z[F](N-1)``."""
    return all(res.is_zero() for res in derivative_residues(v, K, quotient).values())


def retract(u, K):
    """Kill every generator outside K (``x_j -> 1``)."""
    K = set(K)
    keep = lambda g: Word.gen(g) if g in K else IDENTITY  # noqa: E731
    if isinstance(u, Word):
        return u.substitute(keep)
    return RingElement.coerce(u).substitute(keep)


def lcs_relative_criterion(v: Word, K, n: int, d: int | None = None) -> bool:
    """Is ``v`` in ``gr(F_K, gamma_{n+1} X)``?  Decided by derivative depths.

    Derivatives outside K must have depth at least n; those inside K must
    agree with their retraction onto ``F_K`` to depth n.
    """
    d = n if d is None else d
    if d < n:
        raise Inconclusive(f"truncation {d} below the required degree {n}", d)
    K = set(K)
    for k in sorted(v.generators()):
        dk = derive(v, k)
        target = dk if k not in K else dk - retract(dk, K)
        if ideal_valuation(target, n - 1) != INF:
            return False
    return True


# conjugacy condition --------------------------------------------------------------


@dataclass
class ConjugacyResult:
    found: bool
    conjugator: Word | None = None
    h: Word | None = None
    residue: Word | None = None  # h^-1 r^f, a member of the next level
    provable: bool = False
    residue_depth: int | None = None
    tried: list = field(default_factory=list)

    def to_json(self):
        out = {"found": self.found, "provable_non_conjugate": self.provable}
        if self.found:
            out["conjugator"] = str(self.conjugator)
            out["h"] = str(self.h)
        if self.residue_depth is not None:
            out["residue_depth"] = self.residue_depth
        out["tried"] = [str(f) for f in self.tried]
        return out


def derivative_depth(u, rank: int, depth: int):
    """Depth of ``u`` in ``Z[F] * (N-1)^k``, computed up to ``depth``."""
    q = LevelQuotient(rank, depth)
    return q.psi(coset_map(u, q))


def nonconjugacy_certificate(r: Word, i: int, rank: int):
    """``(provable, depth)``: provable when ``D_n(r)`` has depth below i."""
    depth = derivative_depth(derive(r, rank), rank, i)
    return depth < i, depth


def conjugator_candidates(rank: int, bound: int):
    """``y_n^e`` for ``|e| <= bound`` in (length, syllable) order.

    Modulo ``H N`` only the ``y_n`` exponent of a conjugator matters, and
    conjugating by H or by N preserves ``H * N_{1,i+1}``.
    """
    out = [IDENTITY]
    for e in range(1, bound + 1):
        out.extend([Word.gen(rank, -e), Word.gen(rank, e)])
    return out


def conjugate_into_H_mod(r: Word, i: int, rank: int, bounds: Bounds | None = None, fast_path=True):
    bounds = bounds or Bounds()
    K = set(range(1, rank))
    if fast_path:
        provable, depth = nonconjugacy_certificate(r, i, rank)
        if provable:
            return ConjugacyResult(False, provable=True, residue_depth=depth)
    system = SchreierSystem(rank, K)
    tried = []
    for f in conjugator_candidates(rank, bounds.conj):
        tried.append(f)
        rf = conjugate(r, f)
        zw = system.rewrite_in_schreier(rf)
        alpha = system.alpha_ids(zw.generators())
        if not lcs_relative_criterion(zw, alpha, i, max(bounds.trunc, i)):
            continue
        h = system.spell(retract(zw, alpha))
        residue = h.inverse() * rf
        if not h.generators() <= K or not in_level(residue, i + 1, system):
            raise InternalInconsistency(f"conjugacy witness for {r} by {f} failed to verify")
        return ConjugacyResult(True, f, h, residue, tried=tried)
    return ConjugacyResult(False, tried=tried)


# witnesses --------------------------------------------------------------------------


@dataclass
class Witness:
    word: Word
    level: LevelIndex
    factors: list  # (sign, conjugator) with relator r
    residue: Word  # product^-1 * word, lies in the level subgroup
    ambient_class: object
    intrinsic_class: object

    def certificates(self, r: Word, rank: int, K) -> dict:
        """Re-verify all three certificates from scratch."""
        system = SchreierSystem(rank)
        prod = relator_product([r], [(0, s, f) for s, f in self.factors])
        in_h = self.word.generators() <= set(K)
        in_closure = prod * self.residue == self.word and in_level(self.residue, self.level.l, system)
        outside = not in_level(self.word, self.level.l, system) and (
            subgroup_class(self.word, K, rank, self.level.l) < self.level.l
        )
        return {"in_H": in_h, "in_RN": in_closure, "not_in_N": outside}

    def to_json(self, r=None, rank=None, K=None):
        out = {
            "word": str(self.word),
            "level": {"k": self.level.k, "l": self.level.l},
            "relator_factors": [{"sign": s, "conjugator": str(f)} for s, f in self.factors],
            "residue": str(self.residue),
            "class_in_N": _fmt(self.ambient_class),
            "class_in_H_cap_N": _fmt(self.intrinsic_class),
        }
        if r is not None:
            out["certificates"] = self.certificates(r, rank, K)
        return out


def _fmt(v):
    return "inf" if v == INF else v


def subgroup_class(w: Word, K, rank: int, d: int):
    """Class of ``w`` in ``[H,H]`` computed with H's own Schreier generators."""
    K = sorted(K)
    ren = {k: Word.gen(idx + 1) for idx, k in enumerate(K)}
    if not w.generators() <= set(K):
        raise ValueError(f"{w} is not in the subgroup")
    local = SchreierSystem(max(len(K), 1))
    return level_class(w.substitute(ren), local, d)


def _alpha_letters(rank: int, K, limit: int = 12):
    """Short Schreier generators lying in H, in a fixed order."""
    K = sorted(K)
    system = SchreierSystem(rank, K)
    out = []
    seen = set()
    for radius in range(0, 3):
        vecs = [()]
        for g in range(1, rank + 1):
            rng = range(-radius, radius + 1) if g in K else (0,)
            vecs = [v + (e,) for v in vecs for e in rng]
        vecs.sort(key=lambda v: (sum(abs(e) for e in v), v))
        for vec in vecs:
            s = Word(tuple((j + 1, e) for j, e in enumerate(vec) if e))
            for j in K:
                w = system.schreier_generator(s, j)
                if w is not None and w not in seen:
                    seen.add(w)
                    out.append(w)
                    if len(out) >= limit:
                        return out
    return out


def climb_witness(witness: Witness, target: LevelIndex, r: Word, rank: int, K, d: int = DEFAULT_TRUNC) -> Witness:
    """Raise a certified witness one level at a time by commutating with a letter of ``H ∩ N``.

    With ``v = rho u`` (rho in the relator closure, u at level j) and x in
    ``H ∩ N``, ``[v, x] = [rho, x] * ([[rho, x], u][u, x])`` and the second
    factor lies at level j+1.
    """
    w = witness
    system = SchreierSystem(rank)
    while w.level.l < target.l:
        j = w.level.l
        zv = system.rewrite_in_schreier(w.word)
        # promote the first Schreier letter with a nonzero derivative to the role of x_1
        e = next((z for z in sorted(zv.generators()) if not derive(zv, z).is_zero()), None)
        if e is None:
            raise InternalInconsistency(f"witness {w.word} has no nonzero Schreier derivative")
        base_val = ideal_valuation(derive(zv, e), d)
        step = None
        for x in _alpha_letters(rank, K):
            zx = system.rewrite_in_schreier(x)
            if len(zx.syllables) != 1 or zx.syllables[0][0] == e:
                continue
            if not depth_step(zv, base_val + 1, d, x=zx.syllables[0][0], k=e):
                continue
            cand = commutator(w.word, x)
            amb = level_class(cand, system, d)
            if amb < j + 1:
                step = (x, cand, amb)
                break
        if step is None:
            raise InternalInconsistency(f"no Schreier letter raises the witness {w.word}")
        x, cand, amb = step
        factors = [(-s, f) for s, f in reversed(w.factors)] + [(s, f * x) for s, f in w.factors]
        prod = relator_product([r], [(0, s, f) for s, f in factors])
        residue = prod.inverse() * cand
        level = LevelIndex(1, j + 1)
        if not in_level(residue, level.l, system):
            raise InternalInconsistency("climbed witness is not in the relator closure")
        intr = subgroup_class(cand, K, rank, d)
        if intr != amb:
            raise InternalInconsistency("ambient and intrinsic classes disagree")
        w = Witness(cand, level, factors, residue, amb, intr)
    return w


# the check ----------------------------------------------------------------------------


@dataclass
class TargetVerdict:
    level: LevelIndex
    outcome: str  # Free | NotFree | Unknown
    reason: str
    witness: Witness | None = None


@dataclass
class Verdict:
    outcome: str
    relator: Word
    rank: int
    level_of_relator: int | None
    targets: list
    conjugacy: ConjugacyResult | None
    bounds: Bounds
    oracle: list = field(default_factory=list)

    @property
    def provable(self):
        return bool(self.conjugacy and self.conjugacy.provable)

    def witness(self):
        return next((t.witness for t in self.targets if t.witness is not None), None)

    def to_json(self):
        K = set(range(1, self.rank))
        return {
            "outcome": self.outcome,
            "relator": str(self.relator),
            "rank": self.rank,
            "relator_level": self.level_of_relator,
            "provable_non_conjugate": self.provable,
            "conjugacy": None if self.conjugacy is None else self.conjugacy.to_json(),
            "targets": [
                {
                    "level": {"k": t.level.k, "l": t.level.l},
                    "outcome": t.outcome,
                    "reason": t.reason,
                    "witness": None
                    if t.witness is None
                    else t.witness.to_json(self.relator, self.rank, K),
                }
                for t in self.targets
            ],
            "oracle": self.oracle,
            "bounds": self.bounds.to_json(),
        }


def freiheit_check(
    r: Word,
    sig: FiltrationSignature,
    targets=None,
    bounds: Bounds | None = None,
    rank: int | None = None,
    corroborate: bool = True,
) -> Verdict:
    bounds = bounds or Bounds()
    rank = rank or max(r.max_generator(), 1)
    if rank <= 2:
        raise RankTooSmall("the freedom test needs at least three generators")
    K = set(range(1, rank))
    system = SchreierSystem(rank, K)
    if not system.in_kernel(r):
        raise NotInVerbal(f"{r} is not in the commutator subgroup")
    i = locate_level(r, sig, bounds.trunc, system)
    targets = [t.normalize(sig) for t in (targets or sig.levels(1))]
    conj = conjugate_into_H_mod(r, i, rank, bounds)

    base = None
    if conj.found:
        base = Witness(
            conj.h,
            LevelIndex(1, i + 1),
            [(1, conj.conjugator)],
            conj.residue,
            level_class(conj.h, system, bounds.trunc),
            subgroup_class(conj.h, K, rank, bounds.trunc),
        )
    results = []
    for t in targets:
        if t.l <= i:
            results.append(TargetVerdict(t, "Free", "relator lies in this level"))
        elif conj.found:
            w = climb_witness(base, t, r, rank, K, bounds.trunc)
            results.append(TargetVerdict(t, "NotFree", "conjugate of relator lies in H modulo next level", w))
        elif conj.provable:
            results.append(TargetVerdict(t, "Free", "derivative residue of the relator is nonzero"))
        else:
            results.append(TargetVerdict(t, "Unknown", "no witness within bounds"))
    outs = {t.outcome for t in results}
    if "NotFree" in outs:
        outcome = "NotFree"
    elif outs == {"Free"}:
        outcome = "Free"
    else:
        outcome = "Unknown"
    verdict = Verdict(outcome, r, rank, i, results, conj, bounds)
    if corroborate and outcome == "Free" and bounds.samples > 0:
        from .oracle import SampleSpec, falsify_freedom

        for t in targets:
            if t.l <= i:
                continue
            spec = SampleSpec([r], bounds.conj_len, bounds.factors, bounds.samples, bounds.seed, t)
            rep = falsify_freedom(spec, K, rank)
            verdict.oracle.append(rep.to_json())
            if rep.counterexamples:
                raise InternalInconsistency(f"oracle refuted a Free verdict at {t}")
    return verdict


def agrees_with_core(r: Word, sig, bounds=None, rank=None) -> bool:
    """Outcome is unchanged by passing to the cyclically reduced core."""
    core, _ = cyclic_reduce(r)
    a = freiheit_check(r, sig, bounds=bounds, rank=rank, corroborate=False)
    b = freiheit_check(core, sig, bounds=bounds, rank=rank, corroborate=False)
    return a.outcome == b.outcome
