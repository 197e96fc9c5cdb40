"""Textbook Bellman-Ford, used as a baseline solver and as the test oracle."""
from __future__ import annotations

from .exceptions import VerificationError
from .graph import WeightedDigraph, Walk
from .results import SolveResult


def _negative_cycle(G: WeightedDigraph):
    """Any negative cycle of G (not only those reachable from a source)."""
    n = G.n
    dist = [0] * n
    parent = [-1] * n
    last = -1
    for _ in range(n + 1):
        last = -1
        for a, (u, v, w) in enumerate(zip(G.tails, G.heads, G.lengths)):
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                parent[v] = a
                last = v
        if last < 0:
            return None
    # step back n times to land on the cycle, then read it off
    x = last
    for _ in range(n):
        x = G.tails[parent[x]]
    arcs = []
    y = x
    while True:
        a = parent[y]
        arcs.append(a)
        y = G.tails[a]
        if y == x:
            break
    arcs.reverse()
    cyc = Walk(G, arcs, start=x)
    if cyc.length >= 0:
        raise VerificationError("Bellman-Ford produced a nonnegative cycle")
    return cyc


def bellman_ford(G: WeightedDigraph, s: int) -> SolveResult:
    """Exact distances from ``s`` or a verified negative cycle anywhere in G."""
    if not 0 <= s < G.n:
        raise ValueError(f"source {s} out of range")
    cyc = _negative_cycle(G)
    if cyc is not None:
        return SolveResult(G, s, cycle=cyc, counters={"algorithm": "bellman_ford"})
    dist = [None] * G.n
    parent = [-1] * G.n
    dist[s] = 0
    for _ in range(G.n):
        changed = False
        for a, (u, v, w) in enumerate(zip(G.tails, G.heads, G.lengths)):
            du = dist[u]
            if du is not None and (dist[v] is None or du + w < dist[v]):
                dist[v] = du + w
                parent[v] = a
                changed = True
        if not changed:
            break
    return SolveResult(G, s, dist=dist, parent=parent,
                       counters={"algorithm": "bellman_ford"})
