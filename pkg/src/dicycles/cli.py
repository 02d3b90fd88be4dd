"""Command-line entry point.

Exit codes: 0 query true / all consistent, 1 query false, 2 usage or parse
error, 3 theorem violation found.
"""
from __future__ import annotations

import argparse
import random
import sys

from .cycles import cycle_spectrum, has_cycle_length
from .digraph import Digraph, is_strong, meets_hypotheses
from .families import SpecError, generate, hypothesis_flags, parse_spec, recognize
from .sweep import DEFAULT_ARC_PROB, sweep
from .textio import DecodeError, decode, dot, encode
from .theorems import ALL_THEOREMS, TheoremId

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3

_THEOREM_CHOICES = {
    "all": ALL_THEOREMS,
    "43i": (TheoremId.T43I,),
    "43ii": (TheoremId.T43II,),
    "51": (TheoremId.T51,),
    "l34": (TheoremId.L34I, TheoremId.L34II),
}


class UsageError(Exception):
    pass


def _read_digraph(path: str) -> Digraph:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, newline="") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return decode(text)
    except DecodeError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def cmd_gen(args) -> int:
    try:
        spec = parse_spec(args.spec, random.Random(args.seed))
    except SpecError as exc:
        raise UsageError(str(exc)) from None
    for flag in hypothesis_flags(spec):
        print(f"note: {spec.label()} outside the degree hypotheses: {flag}", file=sys.stderr)
    _write(encode(generate(spec)), args.output)
    return EXIT_TRUE


def cmd_check(args) -> int:
    D = _read_digraph(args.file)
    if args.cycle is not None:
        if not 2 <= args.cycle <= D.p:
            raise UsageError(f"--cycle {args.cycle} outside [2, {D.p}]")
        cyc = has_cycle_length(D, args.cycle)
        print(f"cycle {args.cycle}: " + (" ".join(map(str, cyc.verts)) if cyc else "none"))
        return EXIT_TRUE if cyc else EXIT_FALSE
    if args.strong:
        ok = is_strong(D)
        print(f"strong: {'yes' if ok else 'no'}")
        return EXIT_TRUE if ok else EXIT_FALSE
    if args.hypotheses:
        rep = meets_hypotheses(D)
        print(
            f"hypotheses: {'yes' if rep.holds else 'no'} (min degree {rep.min_degree} vs {rep.degree_bound}, "
            f"min out {rep.min_out}, min in {rep.min_in} vs {rep.semi_bound})"
        )
        return EXIT_TRUE if rep.holds else EXIT_FALSE
    spec = cycle_spectrum(D)
    print("cycle lengths: " + (" ".join(map(str, sorted(spec.lengths))) or "none"))
    if args.hamiltonian:
        ok = spec.hamiltonian
    elif args.pre_hamiltonian:
        ok = spec.pre_hamiltonian
    else:
        ok = spec.pancyclic
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_classify(args) -> int:
    D = _read_digraph(args.file)
    found = recognize(D)
    for w in found:
        print(w.spec.label())
    if not found:
        print("no family")
    return EXIT_TRUE if found else EXIT_FALSE


def cmd_verify(args) -> int:
    if args.mode == "random" and args.seed is None:
        raise UsageError("random mode needs --seed")
    try:
        report = sweep(
            args.p,
            args.mode,
            seed=args.seed,
            trials=args.trials,
            arc_prob=args.arc_prob,
            theorems=_THEOREM_CHOICES[args.theorem],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = report.render()
    if args.report:
        _write(text, args.report)
        print(f"examined={report.examined} applicable={report.applicable} violations={len(report.violations)}")
    else:
        sys.stdout.write(text)
    return EXIT_VIOLATION if report.violations else EXIT_TRUE


def cmd_convert(args) -> int:
    D = _read_digraph(args.file)
    _write(dot(D) if args.dot else encode(D), args.output)
    return EXIT_TRUE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dicycles", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a family member in text format")
    g.add_argument("spec", help="e.g. hnn:n=3,cross=full  bnn:n=4,k=2  q:k=5  h2n:n=4,prime")
    g.add_argument("-o", "--output")
    g.add_argument("--seed", type=int, default=0, help="seed for free choices left out of the spec")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="query one property of a digraph")
    c.add_argument("file")
    q = c.add_mutually_exclusive_group(required=True)
    q.add_argument("--cycle", type=int, metavar="K")
    q.add_argument("--hamiltonian", action="store_true")
    q.add_argument("--pre-hamiltonian", action="store_true")
    q.add_argument("--pancyclic", action="store_true")
    q.add_argument("--strong", action="store_true")
    q.add_argument("--hypotheses", action="store_true")
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("classify", help="list the families a digraph belongs to")
    k.add_argument("file")
    k.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="sweep an order for theorem violations")
    v.add_argument("--p", type=int, required=True)
    v.add_argument("--mode", choices=("exhaustive", "random"), required=True)
    v.add_argument("--seed", type=int)
    v.add_argument("--trials", type=int, default=10**6)
    v.add_argument("--arc-prob", type=float, default=DEFAULT_ARC_PROB)
    v.add_argument("--theorem", choices=tuple(_THEOREM_CHOICES), default="all")
    v.add_argument("--report")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("convert", help="re-encode a digraph, optionally as DOT")
    t.add_argument("file")
    t.add_argument("--dot", action="store_true")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_convert)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dicycles: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
