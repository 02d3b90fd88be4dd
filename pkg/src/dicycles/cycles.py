"""Fixed-length cycle search and the path-insertion toolkit.

All searches are exact.  A cycle is always reported starting at its
lowest-indexed vertex, and DFS extends by the lowest out-neighbour first, so
witnesses are reproducible.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .digraph import Digraph, VertexSet, _bits, popcount, strong_components


class LemmaViolation(RuntimeError):
    """An existence guarantee failed to materialise: a bug, never an input error."""


@dataclass(frozen=True)
class Path:
    verts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.verts) < 2:
            raise ValueError("a path needs at least two vertices")
        if len(set(self.verts)) != len(self.verts):
            raise ValueError(f"path {self.verts} repeats a vertex")

    @property
    def mask(self) -> int:
        m = 0
        for v in self.verts:
            m |= 1 << v
        return m

    def __len__(self) -> int:
        return len(self.verts)

    def is_valid_in(self, D: Digraph) -> bool:
        return all(0 <= v < D.p for v in self.verts) and all(
            D.has_arc(a, b) for a, b in zip(self.verts, self.verts[1:])
        )


@dataclass(frozen=True)
class Cycle:
    verts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.verts) < 2:
            raise ValueError("a cycle needs at least two vertices")
        if len(set(self.verts)) != len(self.verts):
            raise ValueError(f"cycle {self.verts} repeats a vertex")

    @property
    def length(self) -> int:
        return len(self.verts)

    @property
    def mask(self) -> int:
        m = 0
        for v in self.verts:
            m |= 1 << v
        return m

    def __getitem__(self, i: int) -> int:
        return self.verts[i % len(self.verts)]

    def is_valid_in(self, D: Digraph) -> bool:
        k = len(self.verts)
        return all(0 <= v < D.p for v in self.verts) and all(
            D.has_arc(self.verts[t], self.verts[(t + 1) % k]) for t in range(k)
        )


@dataclass(frozen=True)
class Spectrum:
    lengths: frozenset[int]
    p: int

    @property
    def hamiltonian(self) -> bool:
        return self.p in self.lengths

    @property
    def pre_hamiltonian(self) -> bool:
        return self.p - 1 in self.lengths

    @property
    def pancyclic(self) -> bool:
        return self.p >= 3 and all(k in self.lengths for k in range(3, self.p + 1))


@dataclass(frozen=True)
class SplitResult:
    l: int
    out_prefix: VertexSet
    in_suffix: VertexSet


def _cycle_from(rows: Sequence[int], s: int, k: int, allowed: int) -> list[int] | None:
    """A k-cycle through s using only vertices of ``allowed``, via DFS.

    ``allowed`` must contain s.  Dead (visited-set, endpoint) states are
    memoised, which keeps the exhaustive case near the subset-DP bound.
    """
    target = 0
    for v in _bits(allowed):
        if rows[v] >> s & 1:
            target |= 1 << v
    if k == 2:
        for v in _bits(rows[s] & target & ~(1 << s)):
            return [s, v]
        return None
    dead: set[tuple[int, int]] = set()
    path = [s]

    def dfs(v: int, visited: int, depth: int) -> bool:
        # depth = number of vertices on the path so far
        if depth == k:
            return bool(target >> v & 1)
        key = (visited, v)
        if key in dead:
            return False
        cand = rows[v] & allowed & ~visited
        if depth == k - 1:
            cand &= target
        for w in _bits(cand):
            path.append(w)
            if dfs(w, visited | (1 << w), depth + 1):
                return True
            path.pop()
        dead.add(key)
        return False

    return path if dfs(s, 1 << s, 1) else None


def has_cycle_length(D: Digraph, k: int) -> Cycle | None:
    if not 2 <= k <= D.p:
        raise ValueError(f"cycle length {k} outside [2, {D.p}]")
    for comp in strong_components(D):
        if len(comp) < k:
            continue
        remaining = comp.bits
        while popcount(remaining) >= k:
            s = (remaining & -remaining).bit_length() - 1
            found = _cycle_from(D.rows, s, k, remaining)
            if found is not None:
                return Cycle(tuple(found))
            remaining &= ~(1 << s)
    return None


def cycle_spectrum(D: Digraph) -> Spectrum:
    lengths = frozenset(k for k in range(2, D.p + 1) if has_cycle_length(D, k) is not None)
    return Spectrum(lengths, D.p)


def _check_path(D: Digraph, P: Path, x: int) -> None:
    if not P.is_valid_in(D):
        raise ValueError(f"{P.verts} is not a path of the digraph")
    if not 0 <= x < D.p:
        raise ValueError(f"vertex {x} out of range for order {D.p}")
    if x in P.verts:
        raise ValueError(f"vertex {x} already lies on the path")


def insert_vertex(D: Digraph, P: Path, x: int) -> tuple[int, Path] | None:
    """Smallest 1-based i with ``x_i -> x -> x_{i+1}`` and the extended path."""
    _check_path(D, P, x)
    v = P.verts
    out_x, in_x = D.rows[x], D.in_rows[x]
    for i in range(len(v) - 1):
        if in_x >> v[i] & 1 and out_x >> v[i + 1] & 1:
            return i + 1, Path(v[: i + 1] + (x,) + v[i + 1 :])
    return None


def extend_path_maximally(D: Digraph, P: Path, pool: VertexSet) -> tuple[Path, list[int]]:
    """Insert pool vertices, lowest index first, rescanning after each success."""
    if pool.bits & P.mask:
        raise ValueError("pool must be disjoint from the path")
    if not P.is_valid_in(D):
        raise ValueError(f"{P.verts} is not a path of the digraph")
    remaining = pool.bits
    absorbed: list[int] = []
    progress = True
    while progress:
        progress = False
        for z in _bits(remaining):
            hit = insert_vertex(D, P, z)
            if hit is not None:
                P = hit[1]
                absorbed.append(z)
                remaining &= ~(1 << z)
                progress = True
                break
    return P, absorbed


def lemma31_cycles(D: Digraph, C: Cycle, x: int) -> dict[int, Cycle]:
    """A k-cycle through x inside ``V(C) + x`` for every k in ``[2, |C|+1]``.

    Raises ValueError when ``d(x, V(C)) <= |C|``; raises LemmaViolation if a
    length is missing despite the premise.
    """
    if not C.is_valid_in(D):
        raise ValueError(f"{C.verts} is not a cycle of the digraph")
    if not 0 <= x < D.p or x in C.verts:
        raise ValueError(f"vertex {x} must be off the cycle")
    m = C.length
    if D.degree(x, C.mask) < m + 1:
        raise ValueError(f"premise fails: d(x, V(C)) = {D.degree(x, C.mask)} < {m + 1}")
    allowed = C.mask | (1 << x)
    found: dict[int, Cycle] = {}
    for k in range(2, m + 2):
        cyc = _cycle_from(D.rows, x, k, allowed)
        if cyc is None:
            raise LemmaViolation(f"no {k}-cycle through {x} in {sorted(_bits(allowed))}")
        found[k] = Cycle(tuple(cyc))
    return found


def lemma33_split(D: Digraph, P: Path, x: int) -> SplitResult | None:
    """The l with ``O(x,P) = {x_1..x_l}`` and ``I(x,P) = {x_l..x_m}``, if any."""
    _check_path(D, P, x)
    v = P.verts
    m = len(v)
    outs = [bool(D.rows[x] >> u & 1) for u in v]
    ins = [bool(D.in_rows[x] >> u & 1) for u in v]
    l = sum(outs)
    if l == 0 or outs != [True] * l + [False] * (m - l):
        return None
    if ins != [False] * (l - 1) + [True] * (m - l + 1):
        return None
    return SplitResult(
        l,
        VertexSet.of(D.p, v[:l]),
        VertexSet.of(D.p, v[l - 1 :]),
    )
