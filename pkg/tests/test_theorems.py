from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from dicycles import VertexSet, build, converse, meets_hypotheses
from dicycles import _kernels as K
from dicycles.families import FamilySpec, Kind, generate, sample_spec
from dicycles.sweep import code_of, fixed_family_codes
from dicycles.theorems import (
    ALL_THEOREMS,
    EXCEPTIONS,
    TheoremId,
    Verdict,
    check_all,
    check_lemma34_ii_detail,
    check_theorem,
    exception_witness,
)


def complete(n):
    return build(n, [(i, j) for i in range(n) for j in range(n) if i != j])


def random_applicable(rng, p, tries=10_000):
    for _ in range(tries):
        D = build(p, [(i, j) for i in range(p) for j in range(p) if i != j and rng.random() < 0.75])
        if meets_hypotheses(D).holds:
            return D
    raise AssertionError("no applicable digraph sampled")


class TestExamples:
    def test_q5_t43i(self):
        v = check_theorem(generate(FamilySpec(Kind.SYM_CYCLE, 5)), TheoremId.T43I)
        assert v.applicable and not v.predicate_holds and v.exception_member and v.consistent
        assert v.family.kind is Kind.SYM_CYCLE

    def test_k5_t51(self):
        v = check_theorem(complete(5), TheoremId.T51)
        assert v.applicable and v.predicate_holds and not v.exception_member and v.consistent
        assert v.cycle.length == 4

    def test_h6_t51(self):
        v = check_theorem(generate(FamilySpec(Kind.H2N, 3)), TheoremId.T51)
        assert v.applicable and not v.predicate_holds and v.exception_member and v.consistent
        assert v.family.kind is Kind.H2N

    def test_inapplicable(self):
        v = check_theorem(build(5, [(i, (i + 1) % 5) for i in range(5)]), TheoremId.T43I)
        assert not v.applicable and v.consistent

    def test_consistency_rule(self):
        assert not Verdict(TheoremId.T43I, True, True, True).consistent
        assert not Verdict(TheoremId.T43I, True, False, False).consistent
        assert Verdict(TheoremId.T43I, False, True, True).consistent


class TestExceptionLists:
    @pytest.mark.parametrize(
        "spec, theorems",
        [
            (FamilySpec(Kind.B_NN, 3), {TheoremId.T43I, TheoremId.T51}),
            (FamilySpec(Kind.B_NN, 4, arcs=((0, 4), (5, 1))), {TheoremId.T43I, TheoremId.T51}),
            (FamilySpec(Kind.SYM_CYCLE, 5), {TheoremId.T43I, TheoremId.T43II, TheoremId.T51}),
            (FamilySpec(Kind.COMPLETE_BIPARTITE_SYM, 3, q=4), {TheoremId.T43I}),
            (FamilySpec(Kind.H6_PRIME), {TheoremId.T43II}),
            (FamilySpec(Kind.H6_DOUBLE_PRIME), {TheoremId.T43II}),
            (FamilySpec(Kind.H6_TRIPLE_PRIME), {TheoremId.T43II}),
            (FamilySpec(Kind.JOIN_TWO_CLIQUES_PLUS_ONE, 2), {TheoremId.T43II, TheoremId.T51}),
            (FamilySpec(Kind.JOIN_TWO_CLIQUES_PLUS_ONE, 3), {TheoremId.T51}),
            (FamilySpec(Kind.H2N, 4), {TheoremId.T51}),
            (FamilySpec(Kind.H2N_PRIME, 4), {TheoremId.T51}),
        ],
    )
    def test_membership(self, spec, theorems):
        D = generate(spec)
        for t in ALL_THEOREMS:
            v = check_theorem(D, t)
            assert v.applicable and v.consistent, (spec.label(), t)
            assert v.exception_member == (t in theorems), (spec.label(), t)

    def test_hnn(self):
        rng = random.Random(4)
        for n in (3, 4):
            for _ in range(10):
                D = generate(sample_spec(Kind.H_NN, rng, n))
                verdicts = {v.theorem: v for v in check_all(D)}
                assert verdicts[TheoremId.L34I].exception_member
                assert verdicts[TheoremId.T51].exception_member
                assert verdicts[TheoremId.T43II].exception_member == (n == 3)
                assert all(v.consistent for v in verdicts.values())

    def test_n_filter(self):
        # JOIN(3) is on the T43II list only with n = 2
        assert exception_witness(generate(FamilySpec(Kind.JOIN_TWO_CLIQUES_PLUS_ONE, 3)), TheoremId.T43II) is None

    def test_lists_are_closed(self):
        assert set(EXCEPTIONS) == set(ALL_THEOREMS)


class TestLemma34Detail:
    def test_k5(self):
        D = complete(5)
        for x in range(5):
            others = [v for v in range(5) if v != x]
            for B in itertools.combinations(others, 3):
                v = check_lemma34_ii_detail(D, VertexSet.of(5, B), x)
                assert v.applicable and v.predicate_holds

    def test_hnn_dual_clause(self):
        n = 3
        D = generate(FamilySpec(Kind.H_NN, n, arcs=tuple((f, n + f) for f in range(n))))
        B = VertexSet.of(6, range(3, 6))
        for x in range(3):
            assert D.in_rows[x] & B.bits == 0
            v = check_lemma34_ii_detail(D, B, x)
            assert v.applicable and v.predicate_holds

    def test_random_p6_all_pairs(self):
        rng = random.Random(6)
        for _ in range(20):
            D = random_applicable(rng, 6)
            for x in range(6):
                others = [v for v in range(6) if v != x]
                for size in range(3, 6):
                    for B in itertools.combinations(others, size):
                        assert check_lemma34_ii_detail(D, VertexSet.of(6, B), x).predicate_holds

    def test_size_guard(self):
        with pytest.raises(ValueError, match="below"):
            check_lemma34_ii_detail(complete(6), VertexSet.of(6, [1, 2]), 0)
        with pytest.raises(ValueError, match="outside"):
            check_lemma34_ii_detail(complete(6), VertexSet.of(6, [0, 1, 2]), 0)

    def test_failure_reasons(self):
        from dicycles.theorems import _l34ii_pair

        # vertex 0 only reaches 1, so |B| = 4 and |B| = 3 sets both fail
        D = build(6, [(0, 1), (1, 0), (3, 0), (2, 1)])
        assert "A(x->B) empty" in _l34ii_pair(D, 0b111100, 0)
        assert "misses part" in _l34ii_pair(D, 0b111000, 0)
        assert not check_lemma34_ii_detail(D, VertexSet.of(6, [2, 3, 4, 5]), 0).applicable


def test_l34ii_reduction_matches_exhaustive():
    from dicycles.theorems import _l34ii_all, _l34ii_pair

    rng = random.Random(21)
    for _ in range(300):
        p = rng.randint(5, 10)
        D = build(p, [(i, j) for i in range(p) for j in range(p) if i != j and rng.random() < 0.55])
        exhaustive = all(
            not _l34ii_pair(D, sum(1 << v for v in B), x)
            for x in range(p)
            for size in range(p // 2, p)
            for B in itertools.combinations([v for v in range(p) if v != x], size)
        )
        full = (1 << p) - 1
        # the dichotomy only fails when some vertex misses more than floor(p/2) others
        bounded = all(
            bin(full & ~rows[x] & ~(1 << x)).count("1") <= p // 2 for rows in (D.rows, D.in_rows) for x in range(p)
        )
        assert exhaustive == bounded == (not _l34ii_all(D))


def test_duality_closure():
    rng = random.Random(12)
    for _ in range(200):
        D = random_applicable(rng, rng.randint(5, 7))
        R = converse(D)
        assert meets_hypotheses(R).holds
        assert [v.consistent for v in check_all(D)] == [v.consistent for v in check_all(R)]
    for kind in (Kind.H_NN, Kind.B_NN, Kind.H2N, Kind.H6_PRIME, Kind.H6_DOUBLE_PRIME, Kind.H6_TRIPLE_PRIME):
        D = generate(sample_spec(kind, rng, None if kind.value.startswith("h6") else 3))
        for t in ALL_THEOREMS:
            assert check_theorem(converse(D), t).consistent


def test_kernel_status_matches_reference():
    rng = random.Random(99)
    bits = {
        TheoremId.T43I: K.HAS_C3,
        TheoremId.T43II: K.HAS_C4,
        TheoremId.T51: K.HAS_CPM1,
        TheoremId.L34I: K.STRONG,
        TheoremId.L34II: K.L34II_OK,
    }
    for p in (5, 6, 7, 8):
        pc = np.array([bin(m).count("1") for m in range(1 << p)], dtype=np.int64)
        fixed = fixed_family_codes(p)
        for _ in range(150):
            D = random_applicable(rng, p)
            rows = np.array(D.rows, dtype=np.int64)
            cols = np.array(D.in_rows, dtype=np.int64)
            st = K.status(rows, cols, p, pc, code_of(D), fixed)
            for t, bit in bits.items():
                v = check_theorem(D, t)
                assert bool(st & bit) == v.predicate_holds, (t, D)
                if v.exception_member:
                    assert st & K.NEEDS_RECOGNITION


def test_kernel_flags_every_family_member():
    rng = random.Random(5)
    for kind in Kind:
        for _ in range(20):
            spec = sample_spec(kind, rng)
            D = generate(spec)
            if not 5 <= D.p <= 8 or not meets_hypotheses(D).holds:
                continue
            perm = list(range(D.p))
            rng.shuffle(perm)
            D = D.relabel(perm)
            if any(check_theorem(D, t).exception_member for t in ALL_THEOREMS):
                pc = np.array([bin(m).count("1") for m in range(1 << D.p)], dtype=np.int64)
                st = K.status(
                    np.array(D.rows, dtype=np.int64),
                    np.array(D.in_rows, dtype=np.int64),
                    D.p,
                    pc,
                    code_of(D),
                    fixed_family_codes(D.p),
                )
                assert st & K.NEEDS_RECOGNITION, spec.label()
