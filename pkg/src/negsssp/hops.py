"""Hop-limited distances by the Bellman-Ford/Dijkstra hybrid.

Round 0 is a Dijkstra pass over the nonnegative arcs from the offset
sources. Round ``i + 1`` relaxes the frozen-negative arcs out of every
vertex whose value changed in round ``i`` and runs Dijkstra from the
improved heads only, so a round costs time proportional to what changed.
Once a round changes no tail of a negative arc the table is stable and the
remaining rounds are skipped.
"""
from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Mapping

from .exceptions import NegativeCycleError, VerificationError
from .graph import PotentialVector, WeightedDigraph, Walk, emit, restrict_negatives


@dataclass(frozen=True)
class SourceSpec:
    """Offset source set; ``reverse`` asks for distances *to* the sources."""

    offsets: Mapping[int, int]
    reverse: bool = False

    @classmethod
    def of(cls, vertices, offset=0, reverse=False):
        return cls({v: offset for v in vertices}, reverse)

    @classmethod
    def single(cls, v, reverse=False):
        return cls({v: 0}, reverse)

    @classmethod
    def everything(cls, n, reverse=False):
        return cls(dict.fromkeys(range(n), 0), reverse)

    @classmethod
    def from_pairs(cls, pairs, reverse=False):
        """Duplicate vertices keep their minimum offset."""
        offsets = {}
        for v, off in pairs:
            if v not in offsets or off < offsets[v]:
                offsets[v] = off
        return cls(offsets, reverse)


# running totals over every hop_distances call, read by the solver's reports
counters = {"calls": 0, "pops": 0, "relaxations": 0}


def _as_sources(sources):
    if isinstance(sources, SourceSpec):
        return sources
    if isinstance(sources, Mapping):
        return SourceSpec(dict(sources))
    if isinstance(sources, int):
        return SourceSpec.single(sources)
    return SourceSpec.of(sources)


@dataclass
class HopDistanceTable:
    graph: WeightedDigraph
    sources: SourceSpec
    hops: int
    dist: list
    parent: list
    changed: list                     # changed[r]: vertices improved in round r
    stable_from: int | None           # first round after which nothing changes
    pops: int = 0
    relaxations: int = 0
    keep_rounds: bool = False
    _hist_r: list | None = field(default=None, repr=False)
    _hist_d: list | None = field(default=None, repr=False)
    _hist_p: list | None = field(default=None, repr=False)
    _prev: dict | None = field(default=None, repr=False)

    @property
    def reverse(self):
        return self.sources.reverse

    def __getitem__(self, v):
        return self.dist[v]

    def value(self, v, rnd=None):
        """Value of vertex ``v`` after round ``rnd`` (default: last round)."""
        if rnd is None or rnd >= self.hops:
            return self.dist[v]
        if rnd < 0:
            raise ValueError("round must be non-negative")
        if self.keep_rounds:
            rs = self._hist_r[v]
            i = bisect_right(rs, rnd)
            return self._hist_d[v][i - 1] if i else None
        if rnd == self.hops - 1:
            return self._prev.get(v, self.dist[v])
        raise ValueError("earlier rounds were not kept; pass keep_rounds=True")

    def round_values(self, rnd):
        return [self.value(v, rnd) for v in range(self.graph.n)]

    def improved_in(self, rnd):
        """Vertices whose value strictly decreased in round ``rnd``."""
        if rnd < len(self.changed):
            return self.changed[rnd]
        return []

    def walk_to(self, v, rnd=None) -> Walk:
        """A witness walk whose length equals ``value(v, rnd)``.

        For forward tables the walk runs from a source to ``v``; for
        reverse tables from ``v`` to a source. Source offsets are not part
        of the walk, so ``walk.length + offset == value``.
        """
        if not self.keep_rounds:
            raise ValueError("witness walks need keep_rounds=True")
        if rnd is None or rnd > self.hops:
            rnd = self.hops
        g = self.graph
        if self.value(v, rnd) is None:
            raise ValueError(f"vertex {v} is unreachable within {rnd} hops")
        arcs = []
        cur, r = v, rnd
        other = g.heads if self.reverse else g.tails
        while True:
            rs = self._hist_r[cur]
            i = bisect_right(rs, r) - 1
            a = self._hist_p[cur][i]
            entry_round = rs[i]
            if a < 0:
                break
            arcs.append(a)
            cur = other[a]
            r = entry_round - 1 if g.frozen[a] else entry_round
        if not self.reverse:
            arcs.reverse()
            return Walk(g, arcs, start=cur)
        return Walk(g, arcs, start=v)

    def source_of(self, walk):
        return walk.start if not self.reverse else walk.end


def hop_distances(G: WeightedDigraph, sources, h: int, keep_rounds: bool = False,
                  reverse: bool | None = None) -> HopDistanceTable:
    """Exact ``h``-hop distances from (or, reversed, to) an offset source set.

    With ``keep_rounds`` every round is recoverable (and witness walks can
    be rebuilt); otherwise only rounds ``h - 1`` and ``h`` are retained.
    """
    if h < 0:
        raise ValueError("hop budget must be non-negative")
    spec = _as_sources(sources)
    if reverse is not None and reverse != spec.reverse:
        spec = SourceSpec(spec.offsets, reverse)
    pos, neg = G.reverse() if spec.reverse else G.forward()
    n = G.n
    dist = [None] * n
    parent = [-1] * n
    stamp = [-1] * n
    hist_r = hist_d = hist_p = None
    if keep_rounds:
        hist_r = [[] for _ in range(n)]
        hist_d = [[] for _ in range(n)]
        hist_p = [[] for _ in range(n)]
    pops = 0
    relax = 0
    heappush, heappop = heapq.heappush, heapq.heappop

    heap = []
    for v, off in spec.offsets.items():
        if not 0 <= v < n:
            raise ValueError(f"source {v} out of range")
        dist[v] = off
        heap.append((off, v))
    heapq.heapify(heap)

    changed_rounds = []
    stable_from = None
    old = {}
    rnd = 0
    track = not keep_rounds and h == 0
    while True:
        changed = []
        while heap:
            d, v = heappop(heap)
            if d != dist[v] or stamp[v] == rnd:
                continue
            stamp[v] = rnd
            pops += 1
            changed.append(v)
            if keep_rounds:
                hist_r[v].append(rnd)
                hist_d[v].append(d)
                hist_p[v].append(parent[v])
            for w, l, a in pos[v]:
                relax += 1
                nd = d + l
                dw = dist[w]
                if dw is None or nd < dw:
                    if track and w not in old:
                        old[w] = dw
                    dist[w] = nd
                    parent[w] = a
                    heappush(heap, (nd, w))
        changed_rounds.append(changed)
        if not any(neg[v] for v in changed):
            stable_from = rnd
            break
        if rnd == h:
            break
        rnd += 1
        track = not keep_rounds and rnd == h
        # only tails that changed last round can offer new candidates
        # snapshot first: a tail may itself be improved by this seeding
        tails = [(u, dist[u]) for u in changed if neg[u]]
        for u, du in tails:
            for w, l, a in neg[u]:
                relax += 1
                nd = du + l
                dw = dist[w]
                if dw is None or nd < dw:
                    if track and w not in old:
                        old[w] = dw
                    dist[w] = nd
                    parent[w] = a
                    heappush(heap, (nd, w))

    counters["calls"] += 1
    counters["pops"] += pops
    counters["relaxations"] += relax
    return HopDistanceTable(G, spec, h, dist, parent, changed_rounds, stable_from,
                            pops, relax, keep_rounds, hist_r, hist_d, hist_p, old)


def dijkstra(G: WeightedDigraph, sources, reverse=False):
    """0-hop distances and parent arcs (one Dijkstra pass over G+)."""
    t = hop_distances(G, sources, 0, reverse=reverse)
    return t.dist, t.parent


def simplify_walk(walk: Walk):
    """Splice repeated vertices out of ``walk``.

    Returns ``(cycle, path)``. If some enclosed closed sub-walk is negative
    it is returned as ``cycle`` (and ``path`` is ``None``); otherwise every
    enclosed loop is nonnegative and excised, leaving a simple ``path``
    with the same endpoints and no greater length.
    """
    g = walk.graph
    stack_v = [walk.start]
    stack_a = []
    where = {walk.start: 0}
    for a in walk.arcs:
        v = g.heads[a]
        stack_a.append(a)
        if v in where:
            i = where[v]
            loop = stack_a[i:]
            if sum(g.lengths[x] for x in loop) < 0:
                return Walk(g, loop, start=v), None
            for x in stack_v[i + 1:]:
                del where[x]
            del stack_v[i + 1:]
            del stack_a[i:]
        else:
            where[v] = len(stack_v)
            stack_v.append(v)
    return None, Walk(g, stack_a, start=walk.start)


def find_negative_cycle(walk: Walk) -> Walk | None:
    """First negative closed sub-walk found while splicing out repeats."""
    return simplify_walk(walk)[0]


def _cycle_from_table(table, v, rnd):
    walk = table.walk_to(v, rnd)
    cyc = find_negative_cycle(walk)
    if cyc is None or not cyc.is_closed() or cyc.length >= 0:
        raise VerificationError("hop table failed to yield a negative cycle")
    return cyc


def johnson(G: WeightedDigraph, hop_budget: int | None = None,
            cycle_bound: int | None = None, origin="johnson"):
    """Johnson potentials phi(v) = d(V, v) by hop-limited rounds.

    Runs the all-vertex, zero-offset hop computation. If it stabilizes
    within ``hop_budget`` rounds the potentials are returned (every arc of
    G_phi is then nonnegative). If it still changes after ``cycle_bound``
    rounds (default: the number of negative vertices, an upper bound on the
    hops of any simple path) a verified negative cycle is raised.
    Otherwise returns ``None`` (not stabilized within the budget).
    """
    bound = G.k if cycle_bound is None else cycle_bound
    budget = bound if hop_budget is None else hop_budget
    if budget < 0:
        raise ValueError("hop budget must be non-negative")
    rounds = bound + 1 if budget >= bound else budget
    table = hop_distances(G, SourceSpec.everything(G.n), rounds, keep_rounds=True)
    if table.stable_from is not None and table.stable_from <= max(budget, 0):
        phi = PotentialVector(table.dist, G.negative_vertices)
        return emit(G, phi, origin)
    if table.stable_from is not None:
        # stabilized at budget + 1: potentials exist but not within the budget
        return None
    if budget >= bound:
        improved = table.improved_in(rounds)
        raise NegativeCycleError(_cycle_from_table(table, improved[0], rounds))
    return None


def negative_reach(G: WeightedDigraph, U, eta: int) -> set:
    """Vertices reachable from ``U`` by an ``eta``-hop walk of negative length in G_U."""
    U = set(U)
    if eta <= 0 or not U:
        return set()
    GU = restrict_negatives(G, U)
    t = hop_distances(GU, SourceSpec.of(U), eta)
    return {v for v, d in enumerate(t.dist) if d is not None and d < 0}
