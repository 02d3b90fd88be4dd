"""Loop-free digraphs stored as out-neighbourhood bit rows.

Vertices are ``0..p-1``.  Row ``i`` is an int whose bit ``j`` is set iff the
arc ``i -> j`` is present.  Opposite arcs (2-cycles) are allowed; loops are
not.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

MAX_ORDER = 64
SWEEP_MAX_ORDER = 32


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class VertexSet:
    """Subset of ``{0..p-1}`` held as a bit-vector."""

    bits: int
    p: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.p:
            raise ValueError(f"vertex set {self.bits:#x} exceeds order {self.p}")

    @classmethod
    def of(cls, p: int, vertices: Iterable[int] = ()) -> VertexSet:
        bits = 0
        for v in vertices:
            if not 0 <= v < p:
                raise ValueError(f"vertex {v} out of range for order {p}")
            bits |= 1 << v
        return cls(bits, p)

    @classmethod
    def full(cls, p: int) -> VertexSet:
        return cls((1 << p) - 1, p)

    def __iter__(self) -> Iterator[int]:
        return _bits(self.bits)

    def __len__(self) -> int:
        return popcount(self.bits)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.p and bool(self.bits >> v & 1)

    def __or__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.bits | other.bits, self.p)

    def __and__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.bits & other.bits, self.p)

    def __sub__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.bits & ~other.bits, self.p)

    def complement(self) -> VertexSet:
        return VertexSet(((1 << self.p) - 1) & ~self.bits, self.p)

    def isdisjoint(self, other: VertexSet) -> bool:
        return not self.bits & other.bits

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self)) + "}"


@dataclass(frozen=True)
class DegreeProfile:
    od: int
    id: int

    @property
    def d(self) -> int:
        return self.od + self.id


@dataclass(frozen=True)
class HypothesisReport:
    holds: bool
    min_degree: int
    min_out: int
    min_in: int
    degree_bound: int
    semi_bound: int


@dataclass(frozen=True)
class Digraph:
    p: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.p <= MAX_ORDER:
            raise ValueError(f"order {self.p} outside [1, {MAX_ORDER}]")
        if len(self.rows) != self.p:
            raise ValueError(f"expected {self.p} rows, got {len(self.rows)}")
        limit = 1 << self.p
        for i, row in enumerate(self.rows):
            if row < 0 or row >= limit:
                raise ValueError(f"row {i} uses bits beyond order {self.p}")
            if row >> i & 1:
                raise ValueError(f"loop at vertex {i}")

    @classmethod
    def empty(cls, p: int) -> Digraph:
        return cls(p, (0,) * p)

    @cached_property
    def in_rows(self) -> tuple[int, ...]:
        cols = [0] * self.p
        for i, row in enumerate(self.rows):
            for j in _bits(row):
                cols[j] |= 1 << i
        return tuple(cols)

    @property
    def vertices(self) -> VertexSet:
        return VertexSet.full(self.p)

    def has_arc(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.rows) for j in _bits(row)]

    @property
    def arc_count(self) -> int:
        return sum(popcount(r) for r in self.rows)

    def out_set(self, x: int) -> VertexSet:
        return VertexSet(self.rows[x], self.p)

    def in_set(self, x: int) -> VertexSet:
        return VertexSet(self.in_rows[x], self.p)

    def od(self, x: int, within: int | None = None) -> int:
        row = self.rows[x]
        return popcount(row if within is None else row & within)

    def id(self, x: int, within: int | None = None) -> int:
        col = self.in_rows[x]
        return popcount(col if within is None else col & within)

    def degree(self, x: int, within: int | None = None) -> int:
        """d(x) or, with a mask, d(x, F) = od(x, F) + id(x, F)."""
        return self.od(x, within) + self.id(x, within)

    def degree_pairs(self) -> list[tuple[int, int]]:
        return [(popcount(r), popcount(c)) for r, c in zip(self.rows, self.in_rows)]

    def relabel(self, perm: Sequence[int]) -> Digraph:
        """Image under ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.p)):
            raise ValueError("relabelling must be a permutation of the vertices")
        rows = [0] * self.p
        for i, row in enumerate(self.rows):
            image = 0
            for j in _bits(row):
                image |= 1 << perm[j]
            rows[perm[i]] = image
        return Digraph(self.p, tuple(rows))

    def __str__(self) -> str:
        return f"Digraph(p={self.p}, arcs={self.arcs()})"


def build(p: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
    """Digraph of order ``p`` with the given arcs; duplicates collapse."""
    if not 1 <= p <= MAX_ORDER:
        raise ValueError(f"order {p} outside [1, {MAX_ORDER}]")
    rows = [0] * p
    for arc in arcs:
        i, j = arc
        if not (0 <= i < p and 0 <= j < p):
            raise ValueError(f"arc {arc!r} has an endpoint outside [0, {p})")
        if i == j:
            raise ValueError(f"arc {arc!r} is a loop")
        rows[i] |= 1 << j
    return Digraph(p, tuple(rows))


def neighborhoods(D: Digraph, x: int) -> tuple[VertexSet, VertexSet, DegreeProfile]:
    _check_vertex(D, x)
    out, inn = D.out_set(x), D.in_set(x)
    return out, inn, DegreeProfile(len(out), len(inn))


def adjacency(D: Digraph, x: int, y: int) -> tuple[int, int, int]:
    """``(a+(x,y), a+(y,x), a(x,y))``."""
    _check_vertex(D, x)
    _check_vertex(D, y)
    if x == y:
        raise ValueError("adjacency needs two distinct vertices")
    fwd = int(D.has_arc(x, y))
    bwd = int(D.has_arc(y, x))
    return fwd, bwd, fwd + bwd


def arc_set(D: Digraph, F: VertexSet, B: VertexSet) -> tuple[int, bool]:
    """``|A(F -> B)|`` and whether every vertex of F dominates every vertex of B."""
    if not F.isdisjoint(B):
        raise ValueError(f"sets {F!r} and {B!r} overlap")
    count = sum(popcount(D.rows[f] & B.bits) for f in F)
    return count, count == len(F) * len(B)


def induced(D: Digraph, F: VertexSet) -> tuple[Digraph, list[int]]:
    """``D[F]`` relabelled by increasing original index, plus the old labels."""
    keep = list(F)
    if not keep:
        raise ValueError("cannot induce on an empty vertex set")
    if any(v >= D.p for v in keep):
        raise ValueError("vertex set exceeds the digraph's order")
    pos = {v: t for t, v in enumerate(keep)}
    rows = []
    for v in keep:
        row = 0
        for j in _bits(D.rows[v] & F.bits):
            row |= 1 << pos[j]
        rows.append(row)
    return Digraph(len(keep), tuple(rows)), keep


def converse(D: Digraph) -> Digraph:
    return Digraph(D.p, D.in_rows)


def reach_from(rows: Sequence[int], x: int, within: int) -> int:
    """Vertices of ``within`` reachable from x (x included) along arcs inside ``within``."""
    seen = 1 << x
    frontier = seen
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= rows[v]
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def strong_components(D: Digraph) -> list[VertexSet]:
    """Strong components, arcs between components only go forward in the list."""
    full = (1 << D.p) - 1
    fwd = [reach_from(D.rows, v, full) for v in range(D.p)]
    bwd = [reach_from(D.in_rows, v, full) for v in range(D.p)]
    comps: list[tuple[int, int, int]] = []
    assigned = 0
    for v in range(D.p):
        if assigned >> v & 1:
            continue
        comp = fwd[v] & bwd[v]
        assigned |= comp
        # A component reaching another one reaches strictly more vertices.
        comps.append((-popcount(fwd[v]), v, comp))
    comps.sort()
    return [VertexSet(c, D.p) for _, _, c in comps]


def is_strong(D: Digraph) -> bool:
    full = (1 << D.p) - 1
    return reach_from(D.rows, 0, full) == full and reach_from(D.in_rows, 0, full) == full


def isomorphic(D1: Digraph, D2: Digraph) -> list[int] | None:
    """A bijection ``phi`` with ``i->j`` in D1 iff ``phi[i]->phi[j]`` in D2, or None.

    Backtracking over classes of equal (out, in, 2-cycle) degree, refined
    once by neighbour classes.  Deterministic: vertices and candidates are
    tried in index order.
    """
    if D1.p != D2.p or D1.arc_count != D2.arc_count:
        return None
    p = D1.p
    c1, c2 = _refined_colours(D1), _refined_colours(D2)
    if sorted(c1) != sorted(c2):
        return None
    by_colour: dict[object, list[int]] = {}
    for v, c in enumerate(c2):
        by_colour.setdefault(c, []).append(v)
    order = sorted(range(p), key=lambda v: (len(by_colour[c1[v]]), v))
    phi = [-1] * p
    used = 0

    def extend(t: int) -> bool:
        nonlocal used
        if t == p:
            return True
        v = order[t]
        for w in by_colour[c1[v]]:
            if used >> w & 1:
                continue
            ok = True
            for s in range(t):
                u = order[s]
                pu = phi[u]
                if D1.has_arc(v, u) != D2.has_arc(w, pu) or D1.has_arc(u, v) != D2.has_arc(pu, w):
                    ok = False
                    break
            if ok:
                phi[v] = w
                used |= 1 << w
                if extend(t + 1):
                    return True
                used &= ~(1 << w)
                phi[v] = -1
        return False

    return phi if extend(0) else None


def _refined_colours(D: Digraph) -> list[tuple]:
    base = []
    for v in range(D.p):
        out, inn = D.rows[v], D.in_rows[v]
        base.append((popcount(out), popcount(inn), popcount(out & inn)))
    refined = []
    for v in range(D.p):
        outs = tuple(sorted(base[j] for j in _bits(D.rows[v])))
        ins = tuple(sorted(base[j] for j in _bits(D.in_rows[v])))
        refined.append((base[v], outs, ins))
    return refined


def semi_bound(p: int) -> int:
    """Integer form of the semi-degree threshold p/2 - 1."""
    return math.ceil((p - 2) / 2)


def meets_hypotheses(D: Digraph) -> HypothesisReport:
    pairs = D.degree_pairs()
    min_out = min(o for o, _ in pairs)
    min_in = min(i for _, i in pairs)
    min_degree = min(o + i for o, i in pairs)
    sb = semi_bound(D.p)
    holds = D.p >= 5 and min_degree >= D.p - 1 and min_out >= sb and min_in >= sb
    return HypothesisReport(holds, min_degree, min_out, min_in, D.p - 1, sb)


def _check_vertex(D: Digraph, x: int) -> None:
    if not 0 <= x < D.p:
        raise ValueError(f"vertex {x} out of range for order {D.p}")
