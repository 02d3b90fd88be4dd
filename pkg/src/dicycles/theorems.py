"""Per-digraph verdicts for the three cycle characterisations and the
strong-connectivity / domination lemma they rest on.

A verdict is consistent when the digraph is outside the hypotheses, or when
exactly one of "has the cycle" and "belongs to a listed exception" holds.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

from .cycles import Cycle, has_cycle_length
from .digraph import Digraph, VertexSet, _bits, is_strong, meets_hypotheses, popcount
from .families import FamilyWitness, Kind, recognize


class TheoremId(enum.Enum):
    T43I = "43i"
    T43II = "43ii"
    T51 = "51"
    L34I = "l34i"
    L34II = "l34ii"


ALL_THEOREMS = tuple(TheoremId)

# kind -> required size parameter (None: any, n is fixed by the order anyway)
EXCEPTIONS: dict[TheoremId, dict[Kind, int | None]] = {
    TheoremId.T43I: {Kind.B_NN: None, Kind.SYM_CYCLE: 5, Kind.COMPLETE_BIPARTITE_SYM: None},
    TheoremId.T43II: {
        Kind.H_NN: 3,
        Kind.SYM_CYCLE: 5,
        Kind.H6_PRIME: None,
        Kind.H6_DOUBLE_PRIME: None,
        Kind.H6_TRIPLE_PRIME: None,
        Kind.JOIN_TWO_CLIQUES_PLUS_ONE: 2,
    },
    TheoremId.T51: {
        Kind.H_NN: None,
        Kind.B_NN: None,
        Kind.JOIN_TWO_CLIQUES_PLUS_ONE: None,
        Kind.H2N: None,
        Kind.H2N_PRIME: None,
        Kind.SYM_CYCLE: 5,
    },
    TheoremId.L34I: {Kind.H_NN: None},
    TheoremId.L34II: {},
}


@dataclass(frozen=True)
class Verdict:
    theorem: TheoremId
    applicable: bool
    predicate_holds: bool = False
    exception_member: bool = False
    cycle: Cycle | None = None
    family: FamilyWitness | None = None
    note: str = ""

    @property
    def consistent(self) -> bool:
        return not self.applicable or self.predicate_holds != self.exception_member


def cycle_length_for(t: TheoremId, p: int) -> int | None:
    return {TheoremId.T43I: 3, TheoremId.T43II: 4, TheoremId.T51: p - 1}.get(t)


def exception_witness(D: Digraph, t: TheoremId) -> FamilyWitness | None:
    listed = EXCEPTIONS[t]
    for w in recognize(D, listed):
        need = listed[w.kind]
        if need is None or w.spec.n == need:
            return w
    return None


def _l34ii_pair(D: Digraph, B: int, x: int) -> str:
    """Empty string if the domination dichotomy holds for (B, x), else why not."""
    p = D.p
    size = popcount(B)
    to_b = D.rows[x] & B
    from_b = D.in_rows[x] & B
    if 2 * size >= p + 1:
        if not to_b:
            return f"A(x->B) empty for x={x}, B={VertexSet(B, p)!r}"
        if not from_b:
            return f"A(B->x) empty for x={x}, B={VertexSet(B, p)!r}"
    elif size == p // 2:
        rest = ((1 << p) - 1) & ~B & ~(1 << x)
        if not to_b and D.rows[x] & rest != rest:
            return f"x={x} misses part of V-(B+x) with A(x->B) empty, B={VertexSet(B, p)!r}"
        if not from_b and D.in_rows[x] & rest != rest:
            return f"V-(B+x) misses x={x} with A(B->x) empty, B={VertexSet(B, p)!r}"
    return ""


def _l34ii_all(D: Digraph) -> str:
    p = D.p
    if p <= 8:
        for x in range(p):
            others = [v for v in range(p) if v != x]
            for size in range(p // 2, p):
                for combo in combinations(others, size):
                    why = _l34ii_pair(D, sum(1 << v for v in combo), x)
                    if why:
                        return why
        return ""
    # Only B inside the non-out (non-in) neighbourhood can fail; test the
    # largest such B of each qualifying size.
    full = (1 << p) - 1
    for x in range(p):
        for rows in (D.rows, D.in_rows):
            missing = full & ~rows[x] & ~(1 << x)
            if popcount(missing) > p // 2:
                B = 0
                for v in _bits(missing):
                    if popcount(B) == p // 2:
                        break
                    B |= 1 << v
                why = _l34ii_pair(D, B, x)
                if why:
                    return why
    return ""


def check_theorem(D: Digraph, t: TheoremId) -> Verdict:
    if not meets_hypotheses(D).holds:
        return Verdict(t, applicable=False)
    k = cycle_length_for(t, D.p)
    cyc = None
    note = ""
    if k is not None:
        cyc = has_cycle_length(D, k)
        pred = cyc is not None
    elif t is TheoremId.L34I:
        pred = is_strong(D)
    else:
        note = _l34ii_all(D)
        pred = not note
    fam = exception_witness(D, t)
    return Verdict(t, True, pred, fam is not None, cyc, fam, note)


def check_all(D: Digraph, theorems=ALL_THEOREMS) -> list[Verdict]:
    return [check_theorem(D, t) for t in theorems]


def check_lemma34_ii_detail(D: Digraph, B: VertexSet, x: int) -> Verdict:
    if x in B:
        raise ValueError(f"x={x} must lie outside B")
    if len(B) < D.p // 2:
        raise ValueError(f"|B|={len(B)} below floor(p/2)={D.p // 2}")
    if not meets_hypotheses(D).holds:
        return Verdict(TheoremId.L34II, applicable=False)
    why = _l34ii_pair(D, B.bits, x)
    return Verdict(TheoremId.L34II, True, not why, False, note=why)
