"""Solver outputs and their independent verification."""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import PotentialVector, WeightedDigraph, Walk


@dataclass
class IterationReport:
    """What one neutralization round did (counters are cumulative for the round)."""

    regime: str
    k: int
    h: int = 0
    q: float = 0.0
    path: str = ""                # neutralized | sandwich | reducer | cleanup | fallback
    sample_size: int = 0          # |S| of the accepted attempt
    sandwich_size: int = 0        # |U| before trimming
    retries: int = 0
    repairs: int = 0              # small sandwiches neutralized in place (lazy mode)
    neutralized: int = 0
    pops: int = 0
    relaxations: int = 0
    seconds: float = 0.0

    def as_dict(self):
        return dict(self.__dict__)


@dataclass
class SolveResult:
    """Distances from ``source`` with a shortest-path tree, or a negative cycle."""

    graph: WeightedDigraph = field(repr=False)
    source: int
    dist: list | None = None
    parent: list | None = None            # arc id into each vertex, -1 for none
    potentials: PotentialVector | None = field(default=None, repr=False)
    cycle: Walk | None = None
    reports: list = field(default_factory=list, repr=False)
    counters: dict = field(default_factory=dict)

    @property
    def has_negative_cycle(self):
        return self.cycle is not None

    def cycle_vertices(self):
        return None if self.cycle is None else self.cycle.vertices()


def verify(G: WeightedDigraph, result: SolveResult) -> bool:
    """Check a result against ``G`` without trusting how it was produced."""
    if result.cycle is not None:
        c = result.cycle
        if c.graph is not G and c.graph != G:
            return False
        if any(not 0 <= a < G.m for a in c.arcs):
            return False
        try:
            w = Walk(G, c.arcs, c.start)
        except ValueError:
            return False
        return w.is_closed() and w.length < 0

    dist, parent, s = result.dist, result.parent, result.source
    if dist is None or parent is None or len(dist) != G.n or len(parent) != G.n:
        return False
    if not 0 <= s < G.n or dist[s] != 0:
        return False
    for u, v, w in zip(G.tails, G.heads, G.lengths):
        if dist[u] is None:
            continue
        if dist[v] is None or dist[u] + w < dist[v]:
            return False
    # tree arcs are tight and lead back to the source
    state = [0] * G.n        # 0 unseen, 1 on stack, 2 ok
    state[s] = 2
    for v in range(G.n):
        if dist[v] is None:
            if parent[v] != -1:
                return False
            continue
        chain = []
        x = v
        while state[x] != 2:
            if state[x] == 1:
                return False
            state[x] = 1
            chain.append(x)
            a = parent[x]
            if not 0 <= a < G.m or G.heads[a] != x:
                return False
            u = G.tails[a]
            if dist[u] is None or dist[u] + G.lengths[a] != dist[x]:
                return False
            x = u
        for y in chain:
            state[y] = 2
    return True
