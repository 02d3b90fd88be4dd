"""The ten acceptance criteria at their stated sizes.

Each test records a PASS/FAIL line that is printed in the pytest summary.
The p=6 sweep dominates the runtime (a few minutes on one core).
"""
from __future__ import annotations

import itertools
import random
import time

import numpy as np
import pytest

from conftest import criterion
from dicycles import Digraph, build, converse, meets_hypotheses
from dicycles.cycles import Cycle, Path, cycle_spectrum, has_cycle_length, insert_vertex, lemma31_cycles
from dicycles.families import FamilySpec, Kind, generate, recognize, sample_spec
from dicycles.sweep import sweep
from dicycles.textio import DecodeError, decode, encode
from dicycles.theorems import ALL_THEOREMS
from oracles import naive_applicable, perm_has_cycle
from test_textio import MALFORMED

# frozen from the naive unpruned oracle (tests/oracles.py), run once
GOLDEN_APPLICABLE = {5: 67561, 6: 84228846}

H6 = (Kind.H6_PRIME, Kind.H6_DOUBLE_PRIME, Kind.H6_TRIPLE_PRIME)


def assert_clean(rep):
    assert rep.violations == []
    for t in ALL_THEOREMS:
        tl = rep.tallies[t]
        assert tl.violations == 0 and tl.consistent == rep.applicable


def test_criterion_1_exhaustive_p5():
    with criterion(1, "exhaustive sweep p=5") as c:
        t0 = time.perf_counter()
        rep = sweep(5, "exhaustive")
        elapsed = time.perf_counter() - t0
        c["text"] = f"examined={rep.examined} applicable={rep.applicable} violations={len(rep.violations)} {elapsed:.1f}s"
        assert rep.examined == 1 << 20
        assert rep.applicable == GOLDEN_APPLICABLE[5]
        assert_clean(rep)
        assert elapsed < 60


def test_criterion_2_exhaustive_p6():
    with criterion(2, "exhaustive sweep p=6") as c:
        rng = np.random.default_rng(20240601)
        probe = np.unique(rng.integers(0, 1 << 30, size=1 << 20, dtype=np.int64))
        while probe.size < 1 << 20:
            extra = rng.integers(0, 1 << 30, size=(1 << 20) - probe.size, dtype=np.int64)
            probe = np.unique(np.concatenate([probe, extra]))
        t0 = time.perf_counter()
        rep = sweep(6, "exhaustive", probe=probe)
        elapsed = time.perf_counter() - t0
        naive = naive_applicable(probe, 6)
        agree = int((naive == rep.probe_hits).sum())
        c["text"] = (
            f"applicable={rep.applicable} violations={len(rep.violations)} "
            f"probe agreement {agree}/{probe.size} {elapsed:.0f}s"
        )
        assert rep.examined == 1 << 30
        assert rep.applicable == GOLDEN_APPLICABLE[6]
        assert_clean(rep)
        assert agree == probe.size
        assert elapsed < 2 * 3600


def test_criterion_3_random_p7_p8():
    with criterion(3, "random sweeps p=7, p=8") as c:
        parts = []
        reps = []
        for p in (7, 8):
            rep = sweep(p, "random", seed=1, trials=10**6)
            reps.append(rep)
            parts.append(f"p={p} examined={rep.examined} applicable={rep.applicable} violations={len(rep.violations)}")
        c["text"] = "; ".join(parts)
        for rep in reps:
            assert rep.examined == 10**6
            assert_clean(rep)


def _family_instances(rng):
    """Instances with 2n <= 16 whose parameters lie in the theorem domain."""
    for kind in Kind:
        if kind in H6:
            yield FamilySpec(kind)
            continue
        if kind is Kind.SYM_CYCLE:
            yield FamilySpec(kind, 5)
            continue
        for n in range(1, 9):
            for _ in range(12 if kind in (Kind.H_NN, Kind.B_NN, Kind.H_N_N1_1) else 1):
                try:
                    spec = sample_spec(kind, rng, n)
                    generate(spec)
                except ValueError:
                    break
                if spec.order >= 5 and spec.order <= 17:
                    yield spec


def test_criterion_4_family_contracts():
    with criterion(4, "family contracts n<=8") as c:
        rng = random.Random(4)
        checked = 0
        for spec in _family_instances(rng):
            D = generate(spec)
            p = D.p
            assert meets_hypotheses(D).holds, spec.label()

            def cyc(k):
                return has_cycle_length(D, k) is not None

            if spec.kind is Kind.H_NN:
                assert not cyc(p), spec.label()
                if spec.n == 3:
                    assert not cyc(4), spec.label()
            elif spec.kind is Kind.B_NN:
                assert cyc(4) and cyc(p) and not cyc(3) and not cyc(p - 1), spec.label()
            elif spec.kind in (Kind.H2N, Kind.H2N_PRIME):
                assert not cyc(p - 1), spec.label()
            elif spec.kind is Kind.SYM_CYCLE:
                assert not cyc(3) and not cyc(4)
            elif spec.kind in H6 or (spec.kind is Kind.JOIN_TWO_CLIQUES_PLUS_ONE and spec.n == 2):
                assert not cyc(4), spec.label()
            checked += 1
        c["text"] = f"{checked} instances"


def test_criterion_5_round_trip():
    with criterion(5, "generator/recognizer round trip") as c:
        rng = random.Random(5)
        per_kind = 1000
        for kind in Kind:
            for _ in range(per_kind):
                spec = sample_spec(kind, rng)
                D = generate(spec)
                perm = list(range(D.p))
                rng.shuffle(perm)
                E = D.relabel(perm)
                found = [w for w in recognize(E, [kind]) if w.kind is kind]
                assert found, spec.label()
                w = found[0]
                assert E.relabel(w.mapping) == generate(w.spec), spec.label()
                assert w.spec.order == spec.order
        c["text"] = f"{per_kind} specs x {len(Kind)} kinds, all recognized arc-exactly"


def _insertable_conditions(D, P, x):
    m = len(P)
    d = D.degree(x, P.mask)
    x1, xm = P.verts[0], P.verts[-1]
    cond_i = d >= m + 2
    cond_ii = d >= m + 1 and (not D.has_arc(x, x1) or not D.has_arc(xm, x))
    cond_iii = d >= m and not D.has_arc(x, x1) and not D.has_arc(xm, x)
    return cond_i or cond_ii or cond_iii


def _insertion_instance(rng):
    p = rng.randint(3, 10)
    m = rng.randint(2, p - 1)
    order = list(range(p))
    rng.shuffle(order)
    verts, x = order[:m], order[m]
    arcs = set(zip(verts, verts[1:]))
    arcs |= {(a, b) for a in range(p) for b in range(p) if a != b and x not in (a, b) and rng.random() < 0.4}
    x1, xm = verts[0], verts[-1]
    which = rng.randrange(3)
    slots = [(x, v) for v in verts] + [(v, x) for v in verts]
    if which == 0:
        need, banned = m + 2, set()
    elif which == 1:
        need, banned = m + 1, {rng.choice([(x, x1), (xm, x)])}
    else:
        need, banned = m, {(x, x1), (xm, x)}
    slots = [s for s in slots if s not in banned]
    k = rng.randint(min(need, len(slots)), len(slots))
    arcs |= set(rng.sample(slots, k))
    return build(p, arcs), Path(tuple(verts)), x


def test_criterion_6_insertion():
    with criterion(6, "vertex insertion completeness") as c:
        rng = random.Random(6)
        target, done, tried = 10**5, 0, 0
        while done < target:
            tried += 1
            D, P, x = _insertion_instance(rng)
            if not _insertable_conditions(D, P, x):
                continue
            hit = insert_vertex(D, P, x)
            assert hit is not None, (encode(D), P.verts, x)
            assert hit[1].is_valid_in(D)
            done += 1
        c["text"] = f"{done} instances (p<=10), 100% inserted"


def _check_cycles_through(D, C, x):
    found = lemma31_cycles(D, C, x)
    assert sorted(found) == list(range(2, C.length + 2))
    for k, cyc in found.items():
        assert cyc.length == k and x in cyc.verts and cyc.is_valid_in(D)
        assert cyc.mask & ~(C.mask | 1 << x) == 0


def test_criterion_7_cycles_through_x():
    with criterion(7, "cycles through an outside vertex") as c:
        exhaustive = 0
        for m in (2, 3, 4):
            p = m + 1
            base = [(i, (i + 1) % m) for i in range(m)]
            free = [(a, b) for a, b in itertools.permutations(range(p), 2) if (a, b) not in base]
            C = Cycle(tuple(range(m)))
            for mask in range(1 << len(free)):
                D = build(p, base + [free[t] for t in range(len(free)) if mask >> t & 1])
                if D.degree(m, C.mask) >= m + 1:
                    _check_cycles_through(D, C, m)
                    exhaustive += 1
        rng = random.Random(7)
        sampled = 0
        while sampled < 10**4:
            p = rng.randint(3, 8)
            m = rng.randint(2, p - 1)
            order = list(range(p))
            rng.shuffle(order)
            verts, x = order[:m], order[m]
            arcs = {(verts[i], verts[(i + 1) % m]) for i in range(m)}
            arcs |= {(a, b) for a in range(p) for b in range(p) if a != b and x not in (a, b) and rng.random() < 0.4}
            slots = [(x, v) for v in verts] + [(v, x) for v in verts]
            arcs |= set(rng.sample(slots, rng.randint(m + 1, 2 * m)))
            D = build(p, arcs)
            _check_cycles_through(D, Cycle(tuple(verts)), x)
            sampled += 1
        c["text"] = f"{exhaustive} exhaustive (m+1<=5) + {sampled} seeded (p<=8), zero hard failures"


def test_criterion_8_oracle():
    with criterion(8, "cycle search vs permutation oracle") as c:
        exhaustive = 0
        for p in range(2, 5):
            pairs = list(itertools.permutations(range(p), 2))
            for mask in range(1 << len(pairs)):
                D = build(p, [pairs[t] for t in range(len(pairs)) if mask >> t & 1])
                for k in range(2, p + 1):
                    assert (has_cycle_length(D, k) is not None) == perm_has_cycle(list(D.rows), k)
                exhaustive += 1
        rng = random.Random(8)
        for _ in range(10**4):
            p = rng.randint(2, 7)
            prob = rng.choice([0.15, 0.25, 0.4, 0.6])
            D = build(p, [(a, b) for a, b in itertools.permutations(range(p), 2) if rng.random() < prob])
            for k in range(2, p + 1):
                cyc = has_cycle_length(D, k)
                assert (cyc is not None) == perm_has_cycle(list(D.rows), k), (encode(D), k)
                if cyc is not None:
                    assert cyc.length == k and cyc.is_valid_in(D)
        c["text"] = f"{exhaustive} exhaustive (p<=4) + 10000 seeded (p<=7), 100% agreement"


def test_criterion_9_duality():
    with criterion(9, "converse duality") as c:
        rng = random.Random(9)
        for _ in range(10**4):
            p = rng.randint(2, 8)
            prob = rng.choice([0.2, 0.3, 0.5, 0.7])
            D = build(p, [(a, b) for a, b in itertools.permutations(range(p), 2) if rng.random() < prob])
            assert cycle_spectrum(D).lengths == cycle_spectrum(converse(D)).lengths, encode(D)
        c["text"] = "10000 seeded digraphs (p<=8), spectra equal"


def test_criterion_10_serialization():
    with criterion(10, "serialization") as c:
        rng = random.Random(10)
        for _ in range(10**4):
            p = rng.randint(1, 16)
            rows = ["".join("0" if i == j else rng.choice("01") for j in range(p)) for i in range(p)]
            text = f"{p}\n" + "\n".join(rows) + "\n"
            D = decode(text)
            assert encode(D) == text
            assert decode(encode(D)) == D
        rejected = 0
        for text, line, col in MALFORMED:
            with pytest.raises(DecodeError) as info:
                decode(text)
            assert (info.value.line, info.value.col) == (line, col)
            rejected += 1
        c["text"] = f"10000 round trips; {rejected}/{len(MALFORMED)} malformed rejected with positions"


def test_digraph_type_reexport():
    assert Digraph is type(build(2, []))
