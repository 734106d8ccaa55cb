"""Matrices over group rings, elementary transformations and triangularization.

Row and column indices are 0-based throughout.  Scaling and adding act by
right multiplication, and ``add_scaled_row(i, j, c)`` (row j += row i * c)
needs ``i < j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    IndexOutOfRange,
    InternalInconsistency,
    NotInVerbal,
    ShadowNotTriangular,
    TooManyRelators,
    UnsupportedRing,
    ZeroFactor,
)
from .filtration import FiltrationSignature, LevelQuotient, trivial_valuation
from .fox import derive
from .magnus import INF
from .ring import GammaQuotient, QuotRingElement, RingElement, coset_map
from .schreier import SchreierSystem


@dataclass(frozen=True)
class ElementaryTransform:
    kind: str  # swap_cols | swap_rows | scale_row | add_scaled_row
    i: int
    j: int = -1
    factor: object = None

    def to_json(self):
        out = {"kind": self.kind, "i": self.i}
        if self.kind != "scale_row":
            out["j"] = self.j
        if self.factor is not None:
            out["factor"] = str(self.factor)
        return out

    def is_row_op(self):
        return self.kind != "swap_cols"

    def __str__(self):
        if self.kind == "scale_row":
            return f"scale_row({self.i}, {self.factor})"
        if self.kind == "add_scaled_row":
            return f"add_scaled_row({self.i}->{self.j}, {self.factor})"
        return f"{self.kind}({self.i}, {self.j})"


def swap_cols(i, j):
    return ElementaryTransform("swap_cols", i, j)


def swap_rows(i, j):
    return ElementaryTransform("swap_rows", i, j)


def scale_row(i, c):
    return ElementaryTransform("scale_row", i, -1, c)


def add_scaled_row(i, j, c):
    return ElementaryTransform("add_scaled_row", i, j, c)


def _is_zero(x):
    return x.is_zero()


class RingMatrix:
    """An immutable matrix with the log of transformations that produced it."""

    def __init__(self, entries, cols=None, zero=None, log=(), original=None):
        self.entries = tuple(tuple(row) for row in entries)
        self.rows = len(self.entries)
        self.cols = cols if cols is not None else (len(self.entries[0]) if self.entries else 0)
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")
        if zero is None:
            zero = self.entries[0][0] * 0 if self.entries and self.cols else RingElement()
        self.zero = zero
        self.log = tuple(log)
        self.original = original if original is not None else self

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def __eq__(self, other):
        return (
            isinstance(other, RingMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def map(self, fn, zero=None):
        return RingMatrix(
            [[fn(x) for x in row] for row in self.entries],
            self.cols,
            zero=fn(self.zero) if zero is None else zero,
        )

    def is_zero(self):
        return all(_is_zero(x) for row in self.entries for x in row)

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(x) for x in row] for row in self.entries],
            "log": [t.to_json() for t in self.log],
        }

    def __str__(self):
        return "\n".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries)

    def replay(self):
        """Re-apply the log to the stored original."""
        m = RingMatrix(self.original.entries, self.cols, self.zero)
        for t in self.log:
            m = apply(m, t)
        return m


def _check_index(M, t):
    if t.kind == "swap_cols":
        bound, idx = M.cols, (t.i, t.j)
    elif t.kind == "scale_row":
        bound, idx = M.rows, (t.i,)
    else:
        bound, idx = M.rows, (t.i, t.j)
    for x in idx:
        if not 0 <= x < bound:
            raise IndexOutOfRange(f"{t} out of range for a {M.rows}x{M.cols} matrix")
    if t.kind == "add_scaled_row" and not t.i < t.j:
        raise IndexOutOfRange("add_scaled_row requires source index below target index")
    if t.kind in ("scale_row", "add_scaled_row") and _is_zero(t.factor):
        raise ZeroFactor(f"{t.kind} needs a nonzero factor")


def _apply_rows(rows, t):
    if t.kind == "swap_rows":
        rows[t.i], rows[t.j] = rows[t.j], rows[t.i]
    elif t.kind == "swap_cols":
        for r in rows:
            r[t.i], r[t.j] = r[t.j], r[t.i]
    elif t.kind == "scale_row":
        rows[t.i] = [x * t.factor for x in rows[t.i]]
    elif t.kind == "add_scaled_row":
        rows[t.j] = [a + b * t.factor for a, b in zip(rows[t.j], rows[t.i])]
    else:
        raise ValueError(f"unknown transform {t.kind}")


def apply(M: RingMatrix, t: ElementaryTransform) -> RingMatrix:
    _check_index(M, t)
    rows = [list(r) for r in M.entries]
    _apply_rows(rows, t)
    return RingMatrix(rows, M.cols, M.zero, M.log + (t,), M.original)


def replay(M: RingMatrix, log) -> RingMatrix:
    for t in log:
        M = apply(M, t)
    return M


# construction and projection ---------------------------------------------------


def fox_jacobian(relators, rank: int) -> RingMatrix:
    """Matrix of derivatives ``D_j(r_i)``; every relator must lie in ``[F, F]``."""
    q = GammaQuotient(2, rank)
    rows = []
    for r in relators:
        if not q.contains(r):
            raise NotInVerbal(f"relator {r} is not in the commutator subgroup")
        rows.append([derive(r, j, rank) for j in range(1, rank + 1)])
    return RingMatrix(rows, rank, RingElement())


def project(M: RingMatrix, quotient) -> RingMatrix:
    """Entrywise image in ``Z[F/N]``, or the shadow of a level-one matrix."""
    zero = QuotRingElement(quotient)
    sample = M.zero
    if isinstance(sample, QuotRingElement) and isinstance(sample.quotient, LevelQuotient):
        return M.map(sample.quotient.shadow, zero)
    return M.map(lambda x: coset_map(x, quotient), zero)


def lift_transform(t: ElementaryTransform) -> ElementaryTransform:
    if t.factor is None:
        return t
    return ElementaryTransform(t.kind, t.i, t.j, t.factor.lift())


# valuations and Ore pairs --------------------------------------------------------


@dataclass
class ValProfile:
    psi: object = trivial_valuation
    shadow: object = None  # map to the ring where triangularity is checked
    name: str = "trivial"


def ore_pair(diag, entry):
    """Nonzero ``(b1, b2)`` with ``diag * b1 = -entry * b2``."""
    if diag * entry == entry * diag:
        return -entry, diag
    if hasattr(diag, "is_unit_monomial") and diag.is_unit_monomial():
        return -(diag.inverse() * entry), diag * 0 + 1
    if hasattr(entry, "is_unit_monomial") and entry.is_unit_monomial():
        return diag * 0 + 1, -(entry.inverse() * diag)
    raise UnsupportedRing("no Ore pair available for non-commuting, non-unit entries")


def _is_one(x):
    return (x - 1).is_zero()


# triangularization --------------------------------------------------------------


@dataclass
class TriangularCertificate:
    rank: int
    matrix: RingMatrix
    column_order: list  # original column index now sitting in each position
    mode: str
    start: int = 0
    psi_diag: list = field(default_factory=list)

    def pivots(self):
        return [(k, k) for k in range(self.rank)]

    def verify(self, val: ValProfile, rows: int | None = None) -> bool:
        B = self.matrix
        limit = self.rank if rows is None else rows
        for k in range(limit):
            if _is_zero(B[k, k]):
                return False
            for n in range(k):
                if not _is_zero(B[k, n]):
                    return False
            pk = val.psi(B[k, k])
            for n in range(B.cols):
                if pk > val.psi(B[k, n]):
                    return False
        if rows is None:
            for k in range(self.rank, B.rows):
                if any(not _is_zero(x) for x in B.row(k)[self.start :]):
                    return False
        return True

    def to_json(self, val: ValProfile | None = None):
        out = {
            "rank": self.rank,
            "mode": self.mode,
            "column_order": [c + 1 for c in self.column_order],
            "matrix": self.matrix.to_json(),
        }
        if val is not None:
            out["psi_diag"] = [_fmt_val(val.psi(self.matrix[k, k])) for k in range(self.rank)]
        return out


def _fmt_val(v):
    return "inf" if v == INF else v


class _Work:
    """Mutable working copy that records transformations."""

    def __init__(self, M: RingMatrix):
        self.M = M
        self.rows = [list(r) for r in M.entries]
        self.log = []

    def do(self, t):
        _check_index(self.M, t)
        _apply_rows(self.rows, t)
        self.log.append(t)

    def eliminate(self, l, t):
        """Clear entry ``(t, l)`` using row ``l`` (``l < t``)."""
        b1, b2 = ore_pair(self.rows[l][l], self.rows[t][l])
        if not _is_one(b2):
            self.do(scale_row(t, b2))
        self.do(add_scaled_row(l, t, b1))
        if not _is_zero(self.rows[t][l]):
            raise InternalInconsistency("elimination left a nonzero entry")

    def result(self):
        return RingMatrix(self.rows, self.M.cols, self.M.zero, self.M.log + tuple(self.log), self.M.original)


def shadow_is_triangular(M: RingMatrix, shadow, rows: int) -> bool:
    for k in range(rows):
        if k >= M.cols or _is_zero(shadow(M[k, k])):
            return False
        for n in range(k):
            if not _is_zero(shadow(M[k, n])):
                return False
    return True


def triangularize(
    M: RingMatrix,
    val: ValProfile | None = None,
    mode: str = "full_pivot",
    start: int = 0,
    rows: int | None = None,
    column_order=None,
) -> TriangularCertificate:
    val = val or ValProfile()
    order = list(column_order) if column_order is not None else list(range(M.cols))
    w = _Work(M)
    if mode == "rows_only":
        nrows = M.rows if rows is None else rows
        if val.shadow is not None and not shadow_is_triangular(M, val.shadow, nrows):
            raise ShadowNotTriangular("the shadow of the leading rows is not triangular")
        for t in range(1, nrows):
            while True:
                nz = [l for l in range(t) if not _is_zero(w.rows[t][l])]
                if not nz:
                    break
                w.eliminate(nz[0], t)
        B = w.result()
        return TriangularCertificate(nrows, B, order, mode, start)
    if mode != "full_pivot":
        raise ValueError(f"unknown mode {mode}")
    p = start
    while p < M.rows and p < M.cols:
        best = None
        for i in range(p, M.rows):
            for j in range(p, M.cols):
                x = w.rows[i][j]
                if _is_zero(x):
                    continue
                cand = (val.psi(x), j, i)
                if best is None or cand < best:
                    best = cand
        if best is None:
            break
        _, j, i = best
        if i != p:
            w.do(swap_rows(p, i))
        if j != p:
            w.do(swap_cols(p, j))
            order[p], order[j] = order[j], order[p]
        for t in range(p + 1, M.rows):
            if not _is_zero(w.rows[t][p]):
                w.eliminate(p, t)
        p += 1
    return TriangularCertificate(p, w.result(), order, mode, start)


def clear_below(M: RingMatrix, t0: int) -> RingMatrix:
    """Zero the entries below the diagonal in the first ``t0`` columns."""
    w = _Work(M)
    for l in range(t0):
        for t in range(max(l + 1, t0), M.rows):
            if not _is_zero(w.rows[t][l]):
                w.eliminate(l, t)
    return w.result()


# row-combination certificate -----------------------------------------------------


def _combine(rows, combo, zero):
    width = len(rows[0]) if rows else 0
    out = [zero] * width
    for r, b in zip(rows, combo):
        if _is_zero(b):
            continue
        out = [o + x * b for o, x in zip(out, r)]
    return out


def row_combination_certificate(M: RingMatrix, transform: ElementaryTransform, combo):
    """Carry a right combination of rows across one transformation.

    Returns ``(d, new_combo)`` with ``transform(alpha) * d`` equal to the
    combination ``new_combo`` of the transformed rows, where ``alpha`` is the
    combination ``combo`` of M's rows.  Row transformations leave ``alpha``
    alone; column swaps permute its coordinates.
    """
    _check_index(M, transform)
    combo = list(combo)
    zero = M.zero
    one = zero + 1
    t = transform
    if t.kind == "swap_rows":
        new = list(combo)
        new[t.i], new[t.j] = new[t.j], new[t.i]
        d = one
    elif t.kind == "swap_cols":
        new, d = list(combo), one
    elif t.kind == "add_scaled_row":
        new = list(combo)
        new[t.i] = combo[t.i] - t.factor * combo[t.j]
        d = one
    else:
        b = combo[t.i]
        if _is_zero(b):
            new, d = list(combo), one
        else:
            a = t.factor
            if a * b != b * a:
                raise UnsupportedRing("scaling certificate needs commuting factors")
            # a c = b_i d with c = b_i, d = a
            d = a
            new = [x * d for x in combo]
            new[t.i] = b
    alpha = _combine(M.entries, combo, zero)
    if t.kind == "swap_cols":
        alpha[t.i], alpha[t.j] = alpha[t.j], alpha[t.i]
    after = apply(M, t)
    lhs = [x * d for x in alpha]
    rhs = _combine(after.entries, new, zero)
    if lhs != rhs:
        raise InternalInconsistency("row-combination certificate failed to verify")
    return d, new


# generator selection -------------------------------------------------------------


@dataclass
class SelectionReport:
    rank: int
    relators: list
    t0: int
    t_final: int
    in_pivots: list  # 1-based original columns occupying the pivot positions
    selected: list  # 1-based generator indices
    level0: TriangularCertificate | None
    level1: TriangularCertificate | None
    stages: dict

    @property
    def p(self):
        return len(self.selected)

    def to_json(self):
        return {
            "rank": self.rank,
            "relators": [str(r) for r in self.relators],
            "t0": self.t0,
            "t": self.t_final,
            "I_s": self.in_pivots,
            "selected": self.selected,
            "p": self.p,
            "stages": self.stages,
            "level0": None if self.level0 is None else self.level0.to_json(),
            "level1": None if self.level1 is None else self.level1.to_json(),
        }


def select_generators(relators, sig: FiltrationSignature | None, rank: int):
    """Choose generators whose subgroup meets the relator closure trivially modulo the series."""
    relators = list(relators)
    sig = sig or FiltrationSignature((2,))
    if len(relators) >= rank:
        raise TooManyRelators(f"{len(relators)} relators for rank {rank}")
    M = fox_jacobian(relators, rank)
    q0 = GammaQuotient(2, rank)
    val0 = ValProfile(trivial_valuation, None, "trivial")
    stages: dict = {}

    if not relators:
        return SelectionReport(rank, relators, 0, 0, [], list(range(1, rank + 1)), None, None, stages)

    # level 0: full pivoting over Z[F/[F,F]]
    M0 = project(M, q0)
    cert0 = triangularize(M0, val0, "full_pivot")
    t0 = cert0.rank
    stages["phi0"] = [str(t) for t in cert0.matrix.log]
    order = list(cert0.column_order)

    # lift the level-0 transformations and replay them on the integral matrix
    lifted = [lift_transform(t) for t in cert0.matrix.log]
    M11 = replay(M, lifted)
    if project(M11, q0).entries != cert0.matrix.entries:
        raise InternalInconsistency("lifted transformations disagree with level 0")

    # level 1: Z[F / gamma_{m1+1}([F,F])]
    system = SchreierSystem(rank)
    q1 = LevelQuotient(rank, sig.m1 + 1, system)
    val1 = ValProfile(q1.psi, q1.shadow, f"depth{q1.depth}")
    L = project(M11, q1)
    L = RingMatrix(L.entries, L.cols, L.zero)
    if t0 > 0:
        if project(L, q0).entries != cert0.matrix.entries:
            raise InternalInconsistency("level-one shadow differs from the level-0 matrix")
        c11 = triangularize(L, val1, "rows_only", rows=t0)
        stages["phi11"] = [str(t) for t in c11.matrix.log]
        L2 = clear_below(c11.matrix, t0)
        stages["phi12"] = [str(t) for t in L2.log[len(c11.matrix.log) :]]
        before = len(L2.log)
        cert1 = triangularize(L2, val1, "full_pivot", start=t0, column_order=order)
        stages["phi13"] = [str(t) for t in cert1.matrix.log[before:]]
    else:
        cert1 = triangularize(L, val1, "full_pivot", column_order=order)
        stages["phi1"] = [str(t) for t in cert1.matrix.log]
    t1 = cert1.rank
    order = cert1.column_order
    pivots = sorted(c + 1 for c in order[:t1])
    selected = [j for j in range(1, rank + 1) if j not in pivots]
    return SelectionReport(rank, relators, t0, t1, pivots, selected, cert0, cert1, stages)
