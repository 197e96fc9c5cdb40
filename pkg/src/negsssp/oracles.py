"""Slow, obviously-correct reference computations for tests and the CLI.

None of these are used by the solver itself. They trade speed for
transparency: all-pairs 0-hop distances by Floyd-Warshall, hop distances
by the plain recurrence, and proper hop distances by enumerating ordered
sequences of distinct negative vertices.
"""
from __future__ import annotations

from itertools import permutations

from .graph import WeightedDigraph

INF = None


def _lt(a, b):
    """a < b where None means +inf."""
    if a is None:
        return False
    return b is None or a < b


def _add(*xs):
    if any(x is None for x in xs):
        return None
    return sum(xs)


def zero_hop_apsp(G: WeightedDigraph):
    """``d0[u][v]``: shortest length using only non-frozen arcs (None if unreachable)."""
    n = G.n
    d = [[None] * n for _ in range(n)]
    for v in range(n):
        d[v][v] = 0
    for u, v, w, f in zip(G.tails, G.heads, G.lengths, G.frozen):
        if not f and _lt(w, d[u][v]):
            d[u][v] = w
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik is None:
                continue
            di = d[i]
            for j in range(n):
                if dk[j] is not None and _lt(dik + dk[j], di[j]):
                    di[j] = dik + dk[j]
    return d


def naive_hop_distances(G: WeightedDigraph, offsets: dict, h: int, reverse=False):
    """All rounds ``0..h`` of hop distances by the textbook recurrence.

    Returns a list of per-vertex lists. ``reverse`` gives distances *to*
    the offset sources.
    """
    d0 = zero_hop_apsp(G)
    n = G.n
    if reverse:
        def seg(a, b):
            return d0[b][a]
        arcs = [(G.heads[a], G.tails[a], G.lengths[a]) for a in G.negative_arcs]
    else:
        def seg(a, b):
            return d0[a][b]
        arcs = [(G.tails[a], G.heads[a], G.lengths[a]) for a in G.negative_arcs]
    cur = [None] * n
    for v in range(n):
        for s, off in offsets.items():
            c = _add(off, seg(s, v))
            if _lt(c, cur[v]):
                cur[v] = c
    rounds = [cur]
    for _ in range(h):
        nxt = list(cur)
        for x, y, w in arcs:
            if cur[x] is None:
                continue
            base = cur[x] + w
            for v in range(n):
                c = _add(base, seg(y, v))
                if _lt(c, nxt[v]):
                    nxt[v] = c
        rounds.append(nxt)
        cur = nxt
    return rounds


def proper_hop_distance(G: WeightedDigraph, s: int, t: int, h: int, d0=None):
    """Minimum length over walks from ``s`` to ``t`` with exactly ``h`` hops
    whose negative vertices are pairwise distinct. ``None`` if there is none.
    """
    if d0 is None:
        d0 = zero_hop_apsp(G)
    if h == 0:
        return d0[s][t]
    by_tail = {}
    for a in G.negative_arcs:
        by_tail.setdefault(G.tails[a], []).append(a)
    best = None
    for seq in permutations(sorted(by_tail), h):
        # cur: best length of the prefix ending at each head reached so far
        cur = {s: 0}
        for u in seq:
            into = None
            for x, c in cur.items():
                c = _add(c, d0[x][u])
                if _lt(c, into):
                    into = c
            if into is None:
                cur = {}
                break
            cur = {}
            for a in by_tail[u]:
                y, c = G.heads[a], into + G.lengths[a]
                if _lt(c, cur.get(y)):
                    cur[y] = c
        for y, c in cur.items():
            c = _add(c, d0[y][t])
            if _lt(c, best):
                best = c
    return best


def proper_hop_profile(G: WeightedDigraph, s: int, t: int, hmax: int, d0=None):
    """``{h: proper_hop_distance(G, s, t, h)}`` for ``h = 0..hmax``."""
    if d0 is None:
        d0 = zero_hop_apsp(G)
    return {h: proper_hop_distance(G, s, t, h, d0) for h in range(hmax + 1)}


def brute_distance(G: WeightedDigraph, s: int, t: int, max_hops=None, d0=None):
    """Unrestricted (or ``max_hops``-limited) distance by the recurrence.

    Returns ``None`` when unreachable; raises ``ValueError`` if the distance
    is unbounded (a negative cycle is reachable on the way).
    """
    bound = G.k if max_hops is None else max_hops
    rounds = naive_hop_distances(G, {s: 0}, bound + (1 if max_hops is None else 0))
    if max_hops is None and rounds[-1][t] != rounds[-2][t]:
        raise ValueError("distance is unbounded")
    return rounds[-1][t] if max_hops is not None else rounds[-2][t]
