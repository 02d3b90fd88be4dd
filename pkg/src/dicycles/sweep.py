"""Whole-order theorem sweeps: exhaustive (p = 5, 6) and seeded random (p <= 8).

The compiled kernel evaluates every predicate for each applicable digraph
and hands back only those that need family recognition or fail a
predicate.  Those are finished here with the reference implementation; any
disagreement between the two paths on a predicate aborts the sweep.
"""
from __future__ import annotations

import multiprocessing as mp
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

import numpy as np

from . import _kernels as K
from .digraph import Digraph
from .families import FamilySpec, Kind, generate
from .textio import encode
from .theorems import ALL_THEOREMS, TheoremId, check_theorem, exception_witness

BLOCK = 1 << 16
DEFAULT_ARC_PROB = 0.75
WORKERS_ENV = "DICYCLES_WORKERS"

_BIT = {
    TheoremId.T43I: K.HAS_C3,
    TheoremId.T43II: K.HAS_C4,
    TheoremId.T51: K.HAS_CPM1,
    TheoremId.L34I: K.STRONG,
    TheoremId.L34II: K.L34II_OK,
}
_SLOT = {t: i for i, t in enumerate((TheoremId.T43I, TheoremId.T43II, TheoremId.T51, TheoremId.L34I, TheoremId.L34II))}


def code_of(D: Digraph) -> int:
    """Packed code: compact row i (diagonal dropped) at bits [(p-1)i, (p-1)(i+1))."""
    p, w = D.p, D.p - 1
    code = 0
    for i in range(p - 1, -1, -1):
        row = D.rows[i]
        compact = (row & ((1 << i) - 1)) | ((row >> (i + 1)) << i)
        code = (code << w) | compact
    return code


def digraph_of(code: int, p: int) -> Digraph:
    w = p - 1
    rows = []
    for i in range(p):
        c = (code >> (w * i)) & ((1 << w) - 1)
        rows.append((c & ((1 << i) - 1)) | ((c >> i) << (i + 1)))
    return Digraph(p, tuple(rows))


@lru_cache(maxsize=None)
def fixed_family_codes(p: int) -> np.ndarray:
    """Sorted codes of every relabeling of the fixed exceptional digraphs of order p."""
    specs = []
    if p == 6:
        specs += [FamilySpec(k) for k in (Kind.H6_PRIME, Kind.H6_DOUBLE_PRIME, Kind.H6_TRIPLE_PRIME)]
    if p % 2 == 0:
        specs += [FamilySpec(Kind.H2N, p // 2), FamilySpec(Kind.H2N_PRIME, p // 2)]
    else:
        specs.append(FamilySpec(Kind.JOIN_TWO_CLIQUES_PLUS_ONE, p // 2))
    codes = set()
    for spec in specs:
        D = generate(spec)
        for perm in permutations(range(p)):
            codes.add(code_of(D.relabel(perm)))
    return np.array(sorted(codes), dtype=np.int64)


@dataclass
class TheoremTally:
    predicate: int = 0
    exceptions: int = 0
    consistent: int = 0
    violations: int = 0

    def add(self, other: TheoremTally) -> None:
        self.predicate += other.predicate
        self.exceptions += other.exceptions
        self.consistent += other.consistent
        self.violations += other.violations


@dataclass(frozen=True)
class Violation:
    theorem: TheoremId
    digraph: Digraph
    predicate_holds: bool
    family: str


@dataclass
class SweepReport:
    p: int
    mode: str
    seed: int | None
    trials: int | None
    arc_prob: float | None
    theorems: tuple[TheoremId, ...]
    examined: int = 0
    applicable: int = 0
    tallies: dict[TheoremId, TheoremTally] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)
    probe_hits: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, part: _Part) -> None:
        self.examined += part.examined
        self.applicable += part.applicable
        for t in self.theorems:
            self.tallies[t].add(part.tallies[t])
        self.violations.extend(part.violations)

    def render(self) -> str:
        def opt(v):
            return "-" if v is None else str(v)

        lines = [
            f"p={self.p}",
            f"mode={self.mode}",
            f"seed={opt(self.seed)}",
            f"trials={opt(self.trials)}",
            f"arc_prob={opt(self.arc_prob)}",
            f"examined={self.examined}",
            f"applicable={self.applicable}",
            "theorems=" + ",".join(t.value for t in self.theorems),
        ]
        for t in self.theorems:
            tl = self.tallies[t]
            lines += [
                f"{t.value}.predicate={tl.predicate}",
                f"{t.value}.exceptions={tl.exceptions}",
                f"{t.value}.consistent={tl.consistent}",
                f"{t.value}.violations={tl.violations}",
            ]
        lines.append(f"violations={len(self.violations)}")
        text = "\n".join(lines) + "\n"
        for i, v in enumerate(self.violations, 1):
            text += (
                f"\n[violation {i}]\ntheorem={v.theorem.value}\n"
                f"predicate={int(v.predicate_holds)}\nfamily={v.family or '-'}\n"
            )
            text += encode(v.digraph)
        return text


@dataclass
class _Part:
    examined: int
    applicable: int
    tallies: dict[TheoremId, TheoremTally]
    violations: list[Violation]
    probe_hit: np.ndarray | None = None


def _digest(p, theorems, examined, applicable, counts, codes, words) -> _Part:
    tallies = {t: TheoremTally(predicate=int(counts[_SLOT[t]])) for t in theorems}
    violations: list[Violation] = []
    for code, st in zip(codes.tolist(), words.tolist()):
        D = digraph_of(code, p)
        for t in theorems:
            pred = bool(st & _BIT[t])
            fam = exception_witness(D, t) if st & K.NEEDS_RECOGNITION else None
            if fam is not None:
                tallies[t].exceptions += 1
            if pred != (fam is not None):
                continue
            ref = check_theorem(D, t)
            if ref.predicate_holds != pred or ref.exception_member != (fam is not None):
                raise RuntimeError(
                    f"kernel and reference disagree on {t.value} for\n{encode(D)}"
                )
            tallies[t].violations += 1
            violations.append(Violation(t, D, pred, fam.spec.label() if fam else ""))
    for t in theorems:
        tallies[t].consistent = applicable - tallies[t].violations
    return _Part(examined, applicable, tallies, violations)


def _run_shard(args) -> _Part:
    p, row0, theorems, probe = args
    app, counts, codes, words, hit = K.scan_shard(p, row0, fixed_family_codes(p), probe)
    part = _digest(p, theorems, 0, int(app), counts, codes, words)
    part.probe_hit = hit
    return part


def random_codes(p: int, seed: int, block: int, n: int, arc_prob: float) -> np.ndarray:
    """The n codes of one random block; arcs are i.i.d. with probability arc_prob."""
    bits = p * (p - 1)
    rng = np.random.default_rng([seed, block])
    arcs = rng.random((n, bits)) < arc_prob
    weights = np.left_shift(np.int64(1), np.arange(bits, dtype=np.int64))
    return arcs.astype(np.int64) @ weights


def _run_block(args) -> _Part:
    p, seed, block, n, arc_prob, theorems = args
    codes = random_codes(p, seed, block, n, arc_prob)
    app, counts, kept, words = K.scan_codes(codes, p, fixed_family_codes(p))
    return _digest(p, theorems, n, int(app), counts, kept, words)


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be positive, got {n}")
        return n
    return os.cpu_count() or 1


def _warm(p: int) -> None:
    # compile before forking so workers share the cached machine code
    fixed = fixed_family_codes(p)
    K.scan_codes(np.zeros(1, dtype=np.int64), p, fixed)
    K.scan_shard(p, 0, fixed, np.zeros(0, dtype=np.int64))


def _map(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers, mp_context=mp.get_context("fork")) as ex:
        return list(ex.map(fn, tasks))


def sweep(
    p: int,
    mode: str,
    seed: int | None = None,
    trials: int | None = None,
    arc_prob: float = DEFAULT_ARC_PROB,
    theorems=ALL_THEOREMS,
    workers: int | None = None,
    probe: np.ndarray | None = None,
) -> SweepReport:
    """Check the selected theorems on every applicable digraph of order p.

    ``probe`` (exhaustive mode) is an array of codes; ``report.probe_hits``
    marks which of them the pruned enumeration found applicable.
    """
    theorems = tuple(t for t in ALL_THEOREMS if t in set(theorems))
    if not theorems:
        raise ValueError("no theorem selected")
    workers = default_workers() if workers is None else workers
    if mode == "exhaustive":
        if p not in (5, 6):
            raise ValueError(f"exhaustive mode supports p in {{5, 6}}, got {p}")
        report = SweepReport(p, mode, None, None, None, theorems)
    elif mode == "random":
        if not 5 <= p <= 8:
            raise ValueError(f"random mode supports 5 <= p <= 8, got {p}")
        if seed is None or trials is None or trials < 1:
            raise ValueError("random mode needs an explicit seed and a positive trial count")
        if not 0.0 <= arc_prob <= 1.0:
            raise ValueError(f"arc probability {arc_prob} outside [0, 1]")
        report = SweepReport(p, mode, seed, trials, arc_prob, theorems)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    report.tallies = {t: TheoremTally() for t in theorems}
    _warm(p)

    if mode == "exhaustive":
        w = p - 1
        probe_arr = np.zeros(0, dtype=np.int64) if probe is None else np.asarray(probe, dtype=np.int64)
        sorted_probe, back = np.unique(probe_arr, return_inverse=True)
        shard_of = sorted_probe & ((1 << w) - 1)
        tasks = [
            (p, row0, theorems, np.ascontiguousarray(sorted_probe[shard_of == row0]))
            for row0 in range(1 << w)
        ]
        parts = _map(_run_shard, tasks, workers)
        hits_sorted = np.zeros(sorted_probe.size, dtype=np.bool_)
        for row0, part in enumerate(parts):
            report.merge(part)
            hits_sorted[shard_of == row0] = part.probe_hit
        report.examined = 1 << (p * (p - 1))
        if probe is not None:
            report.probe_hits = hits_sorted[back.reshape(-1)]
    else:
        tasks = []
        for b, start in enumerate(range(0, trials, BLOCK)):
            tasks.append((p, seed, b, min(BLOCK, trials - start), arc_prob, theorems))
        for part in _map(_run_block, tasks, workers):
            report.merge(part)
    return report
