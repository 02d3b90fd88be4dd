"""Exceptional digraph families: generators and structural recognizers.

Every generator uses a fixed canonical numbering (see ``generate``) and takes
its free choices explicitly, so instances are reproducible.  Recognizers
find the defining partition from degree/connectivity structure, then confirm
by arc-exact reconstruction; the returned witness carries the mapping onto
the canonical instance.
"""
from __future__ import annotations

import enum
import random
from collections.abc import Iterable
from dataclasses import dataclass, field

from .digraph import (
    Digraph,
    VertexSet,
    _bits,
    build,
    isomorphic,
    meets_hypotheses,
    popcount,
    strong_components,
)

Arc = tuple[int, int]


class Kind(enum.Enum):
    H_NN = "hnn"
    H_N_N1_1 = "hn11"
    H2N = "h2n"
    H2N_PRIME = "h2n'"
    B_NN = "bnn"
    SYM_CYCLE = "q"
    COMPLETE_SYM = "ks"
    COMPLETE_BIPARTITE_SYM = "kbs"
    JOIN_TWO_CLIQUES_PLUS_ONE = "join1"
    H6_PRIME = "h6p"
    H6_DOUBLE_PRIME = "h6pp"
    H6_TRIPLE_PRIME = "h6ppp"


class SpecError(ValueError):
    """A family specification violates one of its defining constraints."""


@dataclass(frozen=True)
class FamilySpec:
    """One instance of a family.

    ``n`` is the size parameter (cycle length for SYM_CYCLE, first side for
    COMPLETE_BIPARTITE_SYM); ``q`` the second bipartite side.  ``arcs``
    holds the free arc choices in canonical labels: the F->B cross arcs of
    H_NN, the arcs on B+a of H_N_N1_1, or the deleted arcs of B_NN.
    """

    kind: Kind
    n: int = 0
    q: int = 0
    arcs: tuple[Arc, ...] = ()
    orient: str = ""

    @property
    def order(self) -> int:
        k = self.kind
        if k in (Kind.H6_PRIME, Kind.H6_DOUBLE_PRIME, Kind.H6_TRIPLE_PRIME):
            return 6
        if k in (Kind.SYM_CYCLE, Kind.COMPLETE_SYM):
            return self.n
        if k is Kind.COMPLETE_BIPARTITE_SYM:
            return self.n + self.q
        if k is Kind.JOIN_TWO_CLIQUES_PLUS_ONE:
            return 2 * self.n + 1
        return 2 * self.n

    def label(self) -> str:
        k = self.kind
        if k in (Kind.H6_PRIME, Kind.H6_DOUBLE_PRIME, Kind.H6_TRIPLE_PRIME):
            return k.value
        if k is Kind.SYM_CYCLE:
            return f"q:k={self.n}"
        if k is Kind.COMPLETE_BIPARTITE_SYM:
            return f"kbs:p={self.n},q={self.q}"
        if k is Kind.H2N_PRIME:
            return f"h2n:n={self.n},prime"
        if k is Kind.B_NN:
            return f"bnn:n={self.n},deleted={_arcs_text(self.arcs)}"
        if k is Kind.H_NN:
            return f"hnn:n={self.n},cross={_arcs_text(self.arcs)}"
        if k is Kind.H_N_N1_1:
            return f"hn11:n={self.n},orient={self.orient},inner={_arcs_text(self.arcs)}"
        return f"{k.value}:n={self.n}"


def _arcs_text(arcs: Iterable[Arc]) -> str:
    return "/".join(f"{a}-{b}" for a, b in arcs) or "none"


@dataclass(frozen=True)
class FamilyWitness:
    """Proof that a digraph belongs to a family.

    ``mapping[v]`` is the canonical label of D's vertex v, so
    ``D.relabel(mapping) == generate(spec)``.  ``parts`` names the defining
    vertex sets in D's own labels.
    """

    spec: FamilySpec
    mapping: tuple[int, ...]
    parts: dict[str, VertexSet] = field(default_factory=dict, compare=False, hash=False)

    @property
    def kind(self) -> Kind:
        return self.spec.kind

    def confirms(self, D: Digraph) -> bool:
        return D.relabel(self.mapping) == generate(self.spec)


# Letter order -> 0..5, arc lists straight from the definitions.
_H6_TABLES: dict[Kind, tuple[str, str, list[str]]] = {
    # Q6 = x v w u y z x, symmetric, plus xy, xw, zu, vu
    Kind.H6_PRIME: ("xvwuyz", "sym:xv vw wu uy yz zx", ["xy", "xw", "zu", "vu"]),
    # C6 = x y v z w u x, plus ten arcs
    Kind.H6_DOUBLE_PRIME: (
        "xyvzwu",
        "dir:xy yv vz zw wu ux",
        ["xv", "vx", "xu", "xw", "uz", "yu", "yz", "zy", "wz", "wv"],
    ),
    # C6 = x w v z y u x, plus nine arcs
    Kind.H6_TRIPLE_PRIME: (
        "xwvzyu",
        "dir:xw wv vz zy yu ux",
        ["xy", "yv", "vx", "uz", "zw", "wu", "xu", "yz", "vw"],
    ),
}


def _h6_arcs(kind: Kind) -> list[Arc]:
    letters, base, extra = _H6_TABLES[kind]
    idx = {c: i for i, c in enumerate(letters)}
    mode, pairs = base.split(":")
    arcs = []
    for pr in pairs.split():
        a, b = idx[pr[0]], idx[pr[1]]
        arcs.append((a, b))
        if mode == "sym":
            arcs.append((b, a))
    arcs.extend((idx[e[0]], idx[e[1]]) for e in extra)
    return arcs


def _clique(vs: Iterable[int]) -> list[Arc]:
    vs = list(vs)
    return [(a, b) for a in vs for b in vs if a != b]


def _both(a: Iterable[int], b: Iterable[int]) -> list[Arc]:
    b = list(b)
    out = []
    for u in a:
        for v in b:
            out += [(u, v), (v, u)]
    return out


def validate(spec: FamilySpec) -> None:
    k, n = spec.kind, spec.n
    if k is Kind.H_NN:
        if n < 1:
            raise SpecError("H_NN needs n >= 1")
        for f, b in spec.arcs:
            if not (0 <= f < n <= b < 2 * n):
                raise SpecError(f"cross arc {(f, b)} must go from F=[0,{n}) to B=[{n},{2 * n})")
        tails = {f for f, _ in spec.arcs}
        heads = {b for _, b in spec.arcs}
        if len(tails) != n or len(heads) != n:
            raise SpecError("every F vertex needs an arc into B and every B vertex one from F")
    elif k is Kind.H_N_N1_1:
        if n < 2:
            raise SpecError("H_N_N1_1 needs n >= 2")
        if spec.orient not in ("in", "out"):
            raise SpecError("orientation must be 'in' or 'out'")
        a = 2 * n - 1
        inner = set(spec.arcs)
        for u, v in inner:
            if not (n <= u <= a and n <= v <= a) or u == v:
                raise SpecError(f"inner arc {(u, v)} must join distinct vertices of B+a=[{n},{a}]")
        need = {(b, a) if spec.orient == "in" else (a, b) for b in range(n, a)}
        if not need <= inner:
            raise SpecError(
                "orientation 'in' needs B -> a (I(a)=B)"
                if spec.orient == "in"
                else "orientation 'out' needs a -> B (O(a)=B)"
            )
    elif k in (Kind.H2N, Kind.H2N_PRIME):
        if n < 2:
            raise SpecError(f"{k.name} needs n >= 2")
    elif k is Kind.B_NN:
        if n < 3:
            raise SpecError("B_NN needs order 2n >= 6")
        used: set[int] = set()
        for u, v in spec.arcs:
            if not ((u < n <= v < 2 * n) or (v < n <= u < 2 * n)):
                raise SpecError(f"deleted arc {(u, v)} is not an arc of K*_(n,n)")
            if u in used or v in used:
                raise SpecError("deleted arcs must be pairwise independent")
            used |= {u, v}
        if len(spec.arcs) > n:
            raise SpecError("at most n arcs may be deleted")
    elif k is Kind.SYM_CYCLE:
        if n < 3:
            raise SpecError("Q_k* needs k >= 3")
    elif k is Kind.COMPLETE_SYM:
        if n < 1:
            raise SpecError("K*_n needs n >= 1")
    elif k is Kind.COMPLETE_BIPARTITE_SYM:
        if n < 1 or spec.q < 1:
            raise SpecError("K*_(p,q) needs p, q >= 1")
    elif k is Kind.JOIN_TWO_CLIQUES_PLUS_ONE:
        if n < 2:
            raise SpecError("[(Kn u Kn)+K1]* needs n >= 2")


def generate(spec: FamilySpec) -> Digraph:
    """Canonical instance.

    Numbering: H_NN F=[0,n), B=[n,2n); H_N_N1_1 F=[0,n), B=[n,2n-1), a=2n-1;
    H2N F=[0,n-1), B=[n-1,2n-2), x=2n-2, y=2n-1; B_NN sides [0,n), [n,2n);
    JOIN cliques [0,n), [n,2n), hub 2n; H6 variants follow their letter
    order (x,v,w,u,y,z / x,y,v,z,w,u / x,w,v,z,y,u).
    """
    validate(spec)
    k, n = spec.kind, spec.n
    if k is Kind.H_NN:
        arcs = _clique(range(n)) + _clique(range(n, 2 * n)) + list(spec.arcs)
    elif k is Kind.H_N_N1_1:
        F, B, a = range(n), range(n, 2 * n - 1), 2 * n - 1
        arcs = _both(F, B) + list(spec.arcs)
        arcs += [(a, f) for f in F] if spec.orient == "in" else [(f, a) for f in F]
    elif k in (Kind.H2N, Kind.H2N_PRIME):
        F, B, x, y = range(n - 1), range(n - 1, 2 * n - 2), 2 * n - 2, 2 * n - 1
        arcs = _clique([*F, x]) + _clique([*B, y]) + [(x, y)]
        arcs += [(b, x) for b in B] + [(y, f) for f in F]
        if k is Kind.H2N_PRIME:
            arcs.append((y, x))
    elif k is Kind.B_NN:
        gone = set(spec.arcs)
        arcs = [a for a in _both(range(n), range(n, 2 * n)) if a not in gone]
    elif k is Kind.SYM_CYCLE:
        arcs = []
        for i in range(n):
            j = (i + 1) % n
            arcs += [(i, j), (j, i)]
    elif k is Kind.COMPLETE_SYM:
        arcs = _clique(range(n))
    elif k is Kind.COMPLETE_BIPARTITE_SYM:
        arcs = _both(range(n), range(n, n + spec.q))
    elif k is Kind.JOIN_TWO_CLIQUES_PLUS_ONE:
        hub = 2 * n
        arcs = _clique(range(n)) + _clique(range(n, 2 * n)) + _both([hub], range(2 * n))
    else:
        arcs = _h6_arcs(k)
    return build(spec.order, arcs)


def hypothesis_flags(spec: FamilySpec) -> list[str]:
    """Reasons the instance fails the degree hypotheses (empty when it passes)."""
    rep = meets_hypotheses(generate(spec))
    flags = []
    if spec.order < 5:
        flags.append(f"order {spec.order} < 5")
    if rep.min_degree < rep.degree_bound:
        flags.append(f"min degree {rep.min_degree} < {rep.degree_bound}")
    if min(rep.min_out, rep.min_in) < rep.semi_bound:
        flags.append(f"min semi-degree {min(rep.min_out, rep.min_in)} < {rep.semi_bound}")
    return flags


# ---------------------------------------------------------------- recognition


def _sorted_map(p: int, groups: list[Iterable[int]]) -> tuple[int, ...]:
    mapping = [-1] * p
    t = 0
    for g in groups:
        for v in sorted(g):
            mapping[v] = t
            t += 1
    return tuple(mapping)


def _remap(arcs: Iterable[Arc], mapping: tuple[int, ...]) -> tuple[Arc, ...]:
    return tuple(sorted((mapping[u], mapping[v]) for u, v in arcs))


def _finish(D: Digraph, spec: FamilySpec, mapping: tuple[int, ...], parts: dict[str, int]) -> FamilyWitness | None:
    try:
        w = FamilyWitness(spec, mapping, {k: VertexSet(v, D.p) for k, v in parts.items()})
        return w if w.confirms(D) else None
    except SpecError:
        return None


def _is_sym_clique(D: Digraph, mask: int) -> bool:
    return all(D.rows[v] & mask == mask & ~(1 << v) == D.in_rows[v] & mask for v in _bits(mask))


def _independent(D: Digraph, mask: int) -> bool:
    return all(not D.rows[v] & mask for v in _bits(mask))


def _two_colour(D: Digraph) -> tuple[int, int] | None:
    """Sides of the underlying graph's bipartition (side of vertex 0 first)."""
    side = {0: 0}
    queue = [0]
    while queue:
        v = queue.pop()
        for w in _bits(D.rows[v] | D.in_rows[v]):
            if w not in side:
                side[w] = 1 - side[v]
                queue.append(w)
            elif side[w] == side[v]:
                return None
    if len(side) != D.p:
        return None
    a = sum(1 << v for v, s in side.items() if s == 0)
    return a, ((1 << D.p) - 1) & ~a


def _rec_hnn(D: Digraph) -> FamilyWitness | None:
    if D.p % 2:
        return None
    n = D.p // 2
    comps = strong_components(D)
    if len(comps) != 2 or len(comps[0]) != n:
        return None
    F, B = comps[0].bits, comps[1].bits
    if not (_is_sym_clique(D, F) and _is_sym_clique(D, B)):
        return None
    if any(D.rows[b] & F for b in _bits(B)):
        return None
    mapping = _sorted_map(D.p, [_bits(F), _bits(B)])
    cross = [(f, b) for f in _bits(F) for b in _bits(D.rows[f] & B)]
    spec = FamilySpec(Kind.H_NN, n, arcs=_remap(cross, mapping))
    return _finish(D, spec, mapping, {"F": F, "B": B})


def _rec_hn11(D: Digraph) -> FamilyWitness | None:
    if D.p % 2 or D.p < 4:
        return None
    n = D.p // 2
    full = (1 << D.p) - 1
    for a in range(D.p):
        for orient in ("in", "out"):
            B = D.in_rows[a] if orient == "in" else D.rows[a]
            F = full & ~B & ~(1 << a)
            if popcount(B) != n - 1:
                continue
            towards = D.rows[a] if orient == "in" else D.in_rows[a]
            if towards & F != F or not _independent(D, F):
                continue
            if any(D.rows[f] & B != B or D.in_rows[f] & B != B for f in _bits(F)):
                continue
            mapping = _sorted_map(D.p, [_bits(F), _bits(B), [a]])
            ba = B | (1 << a)
            inner = [(u, v) for u in _bits(ba) for v in _bits(D.rows[u] & ba)]
            spec = FamilySpec(Kind.H_N_N1_1, n, arcs=_remap(inner, mapping), orient=orient)
            w = _finish(D, spec, mapping, {"F": F, "B": B, "a": 1 << a})
            if w is not None:
                return w
    return None


def _rec_bipartite(D: Digraph) -> tuple[int, int] | None:
    if D.p < 2:
        return None
    sides = _two_colour(D)
    if sides is None:
        return None
    L, R = sides
    for v in _bits(L):
        if (D.rows[v] | D.in_rows[v]) != R:
            return None
    return L, R


def _rec_bnn(D: Digraph) -> FamilyWitness | None:
    if D.p % 2 or D.p < 6:
        return None
    n = D.p // 2
    sides = _rec_bipartite(D)
    if sides is None or popcount(sides[0]) != n:
        return None
    L, R = sides
    mapping = _sorted_map(D.p, [_bits(L), _bits(R)])
    gone = []
    for u in _bits(L):
        for v in _bits(R):
            if not D.has_arc(u, v):
                gone.append((u, v))
            if not D.has_arc(v, u):
                gone.append((v, u))
    spec = FamilySpec(Kind.B_NN, n, arcs=_remap(gone, mapping))
    return _finish(D, spec, mapping, {"F": L, "H": R})


def _rec_kbs(D: Digraph) -> FamilyWitness | None:
    # Only the unbalanced K*_(n,n+1); balanced ones are B_NN with k = 0.
    if D.p % 2 == 0:
        return None
    sides = _rec_bipartite(D)
    if sides is None:
        return None
    small, big = sorted(sides, key=popcount)
    n = popcount(small)
    if popcount(big) != n + 1:
        return None
    mapping = _sorted_map(D.p, [_bits(small), _bits(big)])
    return _finish(D, FamilySpec(Kind.COMPLETE_BIPARTITE_SYM, n, q=n + 1), mapping, {"P": small, "Q": big})


def _rec_ks(D: Digraph) -> FamilyWitness | None:
    if D.arc_count != D.p * (D.p - 1):
        return None
    return _finish(D, FamilySpec(Kind.COMPLETE_SYM, D.p), tuple(range(D.p)), {})


def _rec_qk(D: Digraph) -> FamilyWitness | None:
    if D.p < 3 or D.rows != D.in_rows or any(popcount(r) != 2 for r in D.rows):
        return None
    walk = [0]
    prev, cur = -1, 0
    while True:
        nbrs = [w for w in _bits(D.rows[cur]) if w != prev]
        nxt = nbrs[0]
        if nxt == 0:
            break
        walk.append(nxt)
        prev, cur = cur, nxt
        if len(walk) > D.p:
            return None
    if len(walk) != D.p:
        return None
    mapping = [0] * D.p
    for i, v in enumerate(walk):
        mapping[v] = i
    return _finish(D, FamilySpec(Kind.SYM_CYCLE, D.p), tuple(mapping), {})


def _rec_join(D: Digraph) -> FamilyWitness | None:
    if D.p % 2 == 0 or D.p < 5:
        return None
    n = (D.p - 1) // 2
    full = (1 << D.p) - 1
    hubs = [h for h in range(D.p) if D.rows[h] == D.in_rows[h] == full & ~(1 << h)]
    if not hubs:
        return None
    hub = hubs[0]
    rest = full & ~(1 << hub)
    low = (rest & -rest).bit_length() - 1
    C1 = D.rows[low] & rest | (1 << low)
    C2 = rest & ~C1
    if popcount(C1) != n or popcount(C2) != n:
        return None
    mapping = _sorted_map(D.p, [_bits(C1), _bits(C2), [hub]])
    spec = FamilySpec(Kind.JOIN_TWO_CLIQUES_PLUS_ONE, n)
    return _finish(D, spec, mapping, {"K1": C1, "K2": C2, "hub": 1 << hub})


def _rec_fixed(kind: Kind):
    def rec(D: Digraph) -> FamilyWitness | None:
        if kind in _H6_TABLES:
            if D.p != 6:
                return None
            spec = FamilySpec(kind)
        else:
            if D.p % 2 or D.p < 4:
                return None
            spec = FamilySpec(kind, D.p // 2)
        canon = generate(spec)
        phi = isomorphic(D, canon)
        if phi is None:
            return None
        inv = [0] * D.p
        for v, c in enumerate(phi):
            inv[c] = v
        if kind in _H6_TABLES:
            parts = {ch: 1 << inv[i] for i, ch in enumerate(_H6_TABLES[kind][0])}
        else:
            n = spec.n
            parts = {
                "F": sum(1 << inv[c] for c in range(n - 1)),
                "B": sum(1 << inv[c] for c in range(n - 1, 2 * n - 2)),
                "x": 1 << inv[2 * n - 2],
                "y": 1 << inv[2 * n - 1],
            }
        return _finish(D, spec, tuple(phi), parts)

    return rec


_RECOGNIZERS = [
    (Kind.H_NN, _rec_hnn),
    (Kind.H_N_N1_1, _rec_hn11),
    (Kind.H2N, _rec_fixed(Kind.H2N)),
    (Kind.H2N_PRIME, _rec_fixed(Kind.H2N_PRIME)),
    (Kind.B_NN, _rec_bnn),
    (Kind.SYM_CYCLE, _rec_qk),
    (Kind.COMPLETE_BIPARTITE_SYM, _rec_kbs),
    (Kind.JOIN_TWO_CLIQUES_PLUS_ONE, _rec_join),
    (Kind.H6_PRIME, _rec_fixed(Kind.H6_PRIME)),
    (Kind.H6_DOUBLE_PRIME, _rec_fixed(Kind.H6_DOUBLE_PRIME)),
    (Kind.H6_TRIPLE_PRIME, _rec_fixed(Kind.H6_TRIPLE_PRIME)),
    (Kind.COMPLETE_SYM, _rec_ks),
]

RECOGNIZED_KINDS = frozenset(k for k, _ in _RECOGNIZERS)
# K*_n is a building block rather than an exceptional family
DEFAULT_KINDS = RECOGNIZED_KINDS - {Kind.COMPLETE_SYM}


def recognize(D: Digraph, kinds: Iterable[Kind] | None = None) -> list[FamilyWitness]:
    """One witness per family D belongs to, in a fixed kind order.

    By default K*_n is not reported (ask for it through ``kinds``);
    K*_(p,q) is reported only in its unbalanced form.
    """
    wanted = DEFAULT_KINDS if kinds is None else frozenset(kinds)
    out = []
    for kind, rec in _RECOGNIZERS:
        if kind in wanted:
            w = rec(D)
            if w is not None:
                out.append(w)
    return out


# ------------------------------------------------------------------- sampling


def sample_spec(kind: Kind, rng: random.Random, n: int | None = None) -> FamilySpec:
    """A valid random spec of ``kind`` (size drawn from the n <= 8 range)."""
    if kind is Kind.H_NN:
        n = n or rng.randint(1, 8)
        cross = {(f, b) for f in range(n) for b in range(n, 2 * n) if rng.random() < 0.5}
        for f in range(n):
            if not any(c[0] == f for c in cross):
                cross.add((f, rng.randrange(n, 2 * n)))
        for b in range(n, 2 * n):
            if not any(c[1] == b for c in cross):
                cross.add((rng.randrange(n), b))
        return FamilySpec(kind, n, arcs=tuple(sorted(cross)))
    if kind is Kind.H_N_N1_1:
        n = n or rng.randint(2, 8)
        orient = rng.choice(("in", "out"))
        a = 2 * n - 1
        ba = range(n, a + 1)
        inner = {(u, v) for u in ba for v in ba if u != v and rng.random() < 0.5}
        inner |= {(b, a) if orient == "in" else (a, b) for b in range(n, a)}
        return FamilySpec(kind, n, arcs=tuple(sorted(inner)), orient=orient)
    if kind in (Kind.H2N, Kind.H2N_PRIME):
        return FamilySpec(kind, n or rng.randint(2, 8))
    if kind is Kind.B_NN:
        n = n or rng.randint(3, 8)
        partners = list(range(n, 2 * n))
        rng.shuffle(partners)
        k = rng.randint(0, n)
        chosen = rng.sample(range(n), k)
        deleted = []
        for i in chosen:
            arc = (i, partners[i]) if rng.random() < 0.5 else (partners[i], i)
            deleted.append(arc)
        return FamilySpec(kind, n, arcs=tuple(sorted(deleted)))
    if kind is Kind.SYM_CYCLE:
        return FamilySpec(kind, n or rng.randint(3, 16))
    if kind is Kind.COMPLETE_SYM:
        return FamilySpec(kind, n or rng.randint(1, 16))
    if kind is Kind.COMPLETE_BIPARTITE_SYM:
        n = n or rng.randint(1, 8)
        return FamilySpec(kind, n, q=n + 1)
    if kind is Kind.JOIN_TWO_CLIQUES_PLUS_ONE:
        return FamilySpec(kind, n or rng.randint(2, 8))
    return FamilySpec(kind)


def _self_check() -> None:
    for kind in _H6_TABLES:
        rep = meets_hypotheses(generate(FamilySpec(kind)))
        if not (rep.min_degree >= 5 and rep.min_out >= 2 and rep.min_in >= 2):
            raise RuntimeError(f"{kind.name} arc table breaks the degree bounds: {rep}")


_self_check()


# -------------------------------------------------------------------- parsing


def _parse_arcs(text: str) -> tuple[Arc, ...]:
    if text == "none":
        return ()
    arcs = []
    for item in text.split("/"):
        a, sep, b = item.partition("-")
        if not sep or not a.isdigit() or not b.isdigit():
            raise SpecError(f"bad arc {item!r}, expected 'a-b'")
        arcs.append((int(a), int(b)))
    return tuple(sorted(arcs))


def _int_param(params: dict[str, str], key: str) -> int:
    if key not in params:
        raise SpecError(f"missing parameter {key}")
    if not params[key].isdigit():
        raise SpecError(f"parameter {key} must be a non-negative integer, got {params[key]!r}")
    return int(params[key])


_PARAM_KEYS: dict[Kind, set[str]] = {
    Kind.H6_PRIME: set(),
    Kind.H6_DOUBLE_PRIME: set(),
    Kind.H6_TRIPLE_PRIME: set(),
    Kind.SYM_CYCLE: {"k"},
    Kind.COMPLETE_BIPARTITE_SYM: {"p", "q"},
    Kind.H_NN: {"n", "cross"},
    Kind.B_NN: {"n", "k", "deleted"},
    Kind.H_N_N1_1: {"n", "orient", "inner"},
}


def parse_spec(text: str, rng: random.Random | None = None) -> FamilySpec:
    """Parse ``name[:key=value,...]``; free choices left out are drawn from rng.

    Accepts everything ``FamilySpec.label`` produces, plus ``cross=full`` for
    H_NN and ``k=K`` for B_NN (delete ``i -> n+i`` for ``i < K``).
    """
    name, _, rest = text.strip().partition(":")
    params: dict[str, str] = {}
    flags: set[str] = set()
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if sep:
            params[key] = value
        else:
            flags.add(key)
    try:
        kind = Kind(name)
    except ValueError:
        raise SpecError(f"unknown family {name!r}") from None
    if "prime" in flags:
        if kind is not Kind.H2N:
            raise SpecError("'prime' only applies to h2n")
        kind = Kind.H2N_PRIME
        flags.discard("prime")
    if flags:
        raise SpecError(f"unknown flags {sorted(flags)}")
    allowed = _PARAM_KEYS.get(kind, {"n"})
    if set(params) - allowed:
        raise SpecError(f"unknown parameters {sorted(set(params) - allowed)} for {kind.value}")
    rng = rng or random.Random(0)

    if kind in _H6_TABLES:
        spec = FamilySpec(kind)
    elif kind is Kind.SYM_CYCLE:
        spec = FamilySpec(kind, _int_param(params, "k"))
    elif kind is Kind.COMPLETE_BIPARTITE_SYM:
        spec = FamilySpec(kind, _int_param(params, "p"), q=_int_param(params, "q"))
    elif kind is Kind.H_NN:
        n = _int_param(params, "n")
        cross = params.get("cross")
        if cross is None:
            spec = sample_spec(kind, rng, n) if n >= 1 else FamilySpec(kind, n)
        elif cross == "full":
            spec = FamilySpec(kind, n, arcs=tuple((f, b) for f in range(n) for b in range(n, 2 * n)))
        else:
            spec = FamilySpec(kind, n, arcs=_parse_arcs(cross))
    elif kind is Kind.B_NN:
        n = _int_param(params, "n")
        if "deleted" in params:
            spec = FamilySpec(kind, n, arcs=_parse_arcs(params["deleted"]))
        elif "k" in params:
            spec = FamilySpec(kind, n, arcs=tuple((i, n + i) for i in range(_int_param(params, "k"))))
        else:
            spec = sample_spec(kind, rng, n) if n >= 3 else FamilySpec(kind, n)
    elif kind is Kind.H_N_N1_1:
        n = _int_param(params, "n")
        orient = params.get("orient")
        if "inner" in params:
            spec = FamilySpec(kind, n, arcs=_parse_arcs(params["inner"]), orient=orient or "")
        else:
            spec = sample_spec(kind, rng, n) if n >= 2 else FamilySpec(kind, n, orient=orient or "")
            if orient is not None and spec.orient != orient:
                a = 2 * n - 1
                need = {(b, a) if orient == "in" else (a, b) for b in range(n, a)}
                spec = FamilySpec(kind, n, arcs=tuple(sorted(set(spec.arcs) | need)), orient=orient)
    else:
        spec = FamilySpec(kind, _int_param(params, "n"))
    validate(spec)
    return spec
