"""Row-matrix text format and DOT export.

A digraph of order p is written as the decimal p on the first line and then
p lines of exactly p characters in {0,1}; character j of row i is 1 iff
i -> j.  Every line, including the last, ends in a single newline.
"""
from __future__ import annotations

from .digraph import MAX_ORDER, Digraph


class DecodeError(ValueError):
    """Malformed digraph text; ``line`` and ``col`` are 1-based."""

    def __init__(self, line: int, col: int, message: str) -> None:
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


def encode(D: Digraph) -> str:
    lines = [str(D.p)]
    for row in D.rows:
        lines.append("".join("1" if row >> j & 1 else "0" for j in range(D.p)))
    return "\n".join(lines) + "\n"


def decode(text: str) -> Digraph:
    if not text.endswith("\n"):
        line = text.count("\n") + 1
        raise DecodeError(line, len(text.rsplit("\n", 1)[-1]) + 1, "missing trailing newline")
    lines = text[:-1].split("\n")
    head = lines[0]
    if not head or not head.isdigit() or not head.isascii() or (head[0] == "0"):
        bad = next((i for i, ch in enumerate(head) if not ("0" <= ch <= "9")), 0)
        raise DecodeError(1, bad + 1, f"order must be a positive decimal without leading zeros, got {head!r}")
    p = int(head)
    if p > MAX_ORDER:
        raise DecodeError(1, 1, f"order {p} exceeds {MAX_ORDER}")
    if len(lines) - 1 != p:
        where = min(len(lines), p + 1) + 1
        raise DecodeError(where, 1, f"expected {p} rows, found {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:]):
        lineno = i + 2
        for j, ch in enumerate(line[:p]):
            if ch not in "01":
                raise DecodeError(lineno, j + 1, f"illegal character {ch!r}")
        if len(line) != p:
            raise DecodeError(lineno, min(len(line), p) + 1, f"row {i + 1} has length {len(line)}, expected {p}")
        if line[i] == "1":
            raise DecodeError(lineno, i + 1, f"loop at row {i + 1}, col {i + 1}")
        rows.append(int(line[::-1], 2))
    return Digraph(p, tuple(rows))


def dot(D: Digraph, name: str = "D") -> str:
    """DOT text: one edge per adjacent pair, 2-cycles drawn with ``dir=both``."""
    out = [f"digraph {name} {{"]
    out += [f"  v{i};" for i in range(D.p)]
    for i in range(D.p):
        for j in range(i + 1, D.p):
            fwd, bwd = D.has_arc(i, j), D.has_arc(j, i)
            if fwd and bwd:
                out.append(f"  v{i} -> v{j} [dir=both];")
            elif fwd:
                out.append(f"  v{i} -> v{j};")
            elif bwd:
                out.append(f"  v{j} -> v{i};")
    out.append("}")
    return "\n".join(out) + "\n"
