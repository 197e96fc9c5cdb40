"""Extended DIMACS shortest-path files (signed integer arc lengths)."""
from __future__ import annotations

from .exceptions import GraphError
from .graph import WeightedDigraph, build_graph


class DimacsError(GraphError):
    def __init__(self, lineno, msg):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _ints(parts, lineno):
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise DimacsError(lineno, "expected integers") from None


def parse_dimacs(text: str) -> WeightedDigraph:
    """Parse ``p sp n m`` plus ``a u v w`` lines (1-based ids) into a graph."""
    n = m = None
    arcs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise DimacsError(lineno, "second problem line")
            if len(parts) != 4 or parts[1] != "sp":
                raise DimacsError(lineno, "expected 'p sp <n> <m>'")
            n, m = _ints(parts[2:], lineno)
            if n < 0 or m < 0:
                raise DimacsError(lineno, "negative size")
        elif tag == "a":
            if n is None:
                raise DimacsError(lineno, "arc before problem line")
            if len(parts) != 4:
                raise DimacsError(lineno, "expected 'a <u> <v> <w>'")
            u, v, w = _ints(parts[1:], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(lineno, f"vertex id out of range 1..{n}")
            if len(arcs) == m:
                raise DimacsError(lineno, f"more than {m} arcs")
            arcs.append((u - 1, v - 1, w))
        else:
            raise DimacsError(lineno, f"unknown line type {tag!r}")
    if n is None:
        raise DimacsError(0, "missing problem line")
    if len(arcs) != m:
        raise DimacsError(lineno if text else 0, f"expected {m} arcs, found {len(arcs)}")
    return build_graph(n, arcs)


def write_dimacs(G: WeightedDigraph, comments=()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p sp {G.n} {G.m}")
    lines += [f"a {u + 1} {v + 1} {w}" for u, v, w in zip(G.tails, G.heads, G.lengths)]
    return "\n".join(lines) + "\n"


def read_dimacs(path) -> WeightedDigraph:
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh.read())
