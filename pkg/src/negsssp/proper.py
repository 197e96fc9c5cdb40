"""Probing a set of negative vertices for cycles, proper negative pairs or distances.

``probe(G, S, h)`` works in G_S and returns exactly one of

* :class:`NegativeCycle`: a closed walk of negative length;
* :class:`ProperPair`: ``s, t`` in ``S`` and a proper walk from ``s`` to
  ``t`` with at most ``h`` hops and negative length;
* :class:`Distances`: the exact values ``d_S(V, v)``.

Method: one run of ``h`` hop rounds from every vertex with offset 0. If no
vertex of ``S`` has gone negative, every walk that ends at a vertex of S
with at most ``h`` hops is nonnegative. Cutting an arbitrary walk at the
tails of its hops into pieces of at most ``h`` hops then shows that only
the final piece can be negative, so the round-``h`` values are already
the true distances. Otherwise the witness walk to a negative vertex of
``S`` is cut down to its first hop and spliced into a simple path,
unless the splicing uncovers a negative loop.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exceptions import VerificationError
from .graph import (PotentialVector, WeightedDigraph, Walk, emit, lift_walk,
                    restrict_negatives)
from .hops import SourceSpec, hop_distances, simplify_walk


@dataclass(frozen=True)
class NegativeCycle:
    walk: Walk


@dataclass(frozen=True)
class ProperPair:
    s: int
    t: int
    walk: Walk


@dataclass(frozen=True)
class Distances:
    values: PotentialVector


def _check_distances(GS, d):
    for u, v, w in zip(GS.tails, GS.heads, GS.lengths):
        if d[u] + w < d[v]:
            raise VerificationError(f"distance label at {v} can still be improved")


def probe(G: WeightedDigraph, S, h: int):
    """Probe ``S`` (a subset of the negative vertices) with hop budget ``h``.

    Certificates are expressed in ``G`` and re-verified before returning.
    """
    if h < 1:
        raise ValueError("probe needs h >= 1")
    S = frozenset(S)
    GS = restrict_negatives(G, S)
    table = hop_distances(GS, SourceSpec.everything(G.n), h, keep_rounds=True)
    d = table.dist
    hit = [x for x in S if d[x] < 0]
    if not hit:
        _check_distances(GS, d)
        return Distances(emit(GS, PotentialVector(d, S), "probe"))

    x = min(hit, key=lambda v: (d[v], v))
    walk = table.walk_to(x, h)
    first = next(i for i, a in enumerate(walk.arcs) if GS.frozen[a])
    walk = Walk(GS, walk.arcs[first:])
    cyc, path = simplify_walk(walk)
    if cyc is not None:
        cyc = lift_walk(cyc, G)
        if not (cyc.is_closed() and cyc.length < 0):
            raise VerificationError("probe produced a bad cycle certificate")
        return NegativeCycle(cyc)
    path = lift_walk(path, G)
    s = path.start
    ok = (s in S and path.end == x and path.length < 0 and path.hops <= h
          and path.is_proper() and set(path.negative_vertices()) <= S)
    if not ok:
        raise VerificationError("probe produced a bad proper-pair witness")
    return ProperPair(s, x, path)
