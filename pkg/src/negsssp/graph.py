"""Directed multigraphs with signed lengths, potentials and preprocessing.

Every graph carries a *frozen* negative-arc flag per arc. Hop counting and
potential validity are defined against that flag, not against the current
sign of the length: reweighting a graph keeps the flags, so an arc that was
negative at the start of an iteration is still a hop after it has been
(incidentally) neutralized.

Lengths are Python ints. Unreachable distances are ``None`` throughout.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _debug
from .exceptions import GraphError


class WeightedDigraph:
    """Immutable arc-list digraph with cached forward/reverse adjacency.

    Vertices are ``0..n-1``. Arc ``a`` goes ``tails[a] -> heads[a]`` with
    length ``lengths[a]``; ``frozen[a]`` marks it as a negative arc (a hop).
    ``arc_origin[a]``, when set, is the id of the arc this one was derived
    from in the immediate parent graph (restrictions and induced subgraphs
    renumber arcs; reweighting does not, so it leaves this unset).
    """

    __slots__ = ("n", "tails", "heads", "lengths", "frozen", "arc_origin",
                 "_fwd", "_rev", "_neg_vertices", "_neg_arcs", "exact")

    def __init__(self, n, tails, heads, lengths, frozen=None, arc_origin=None,
                 exact=True):
        self.n = n
        self.tails = tuple(tails)
        self.heads = tuple(heads)
        self.lengths = tuple(lengths)
        if frozen is None:
            frozen = tuple(w < 0 for w in self.lengths)
        self.frozen = tuple(frozen)
        self.arc_origin = None if arc_origin is None else tuple(arc_origin)
        self.exact = exact
        self._fwd = None
        self._rev = None
        self._neg_vertices = None
        self._neg_arcs = None

    @property
    def m(self):
        return len(self.tails)

    def arc(self, a):
        return self.tails[a], self.heads[a], self.lengths[a]

    def arcs(self):
        return list(zip(self.tails, self.heads, self.lengths))

    @property
    def negative_arcs(self):
        if self._neg_arcs is None:
            self._neg_arcs = tuple(a for a, f in enumerate(self.frozen) if f)
        return self._neg_arcs

    @property
    def negative_vertices(self) -> frozenset:
        """The frozen negative set N (tails of frozen-negative arcs)."""
        if self._neg_vertices is None:
            self._neg_vertices = frozenset(self.tails[a] for a in self.negative_arcs)
        return self._neg_vertices

    @property
    def k(self):
        return len(self.negative_vertices)

    def heads_of(self, U):
        """Heads of the frozen-negative arcs whose tails lie in ``U``."""
        U = set(U)
        return {self.heads[a] for a in self.negative_arcs if self.tails[a] in U}

    def mu(self):
        return self.m + self.n * math.log2(max(self.n, 2))

    def _adjacency(self, reverse):
        pos = [[] for _ in range(self.n)]
        neg = [[] for _ in range(self.n)]
        src, dst = (self.heads, self.tails) if reverse else (self.tails, self.heads)
        for a, (u, v, w, f) in enumerate(zip(src, dst, self.lengths, self.frozen)):
            if f:
                neg[u].append((v, w, a))
            else:
                if w < 0:
                    raise GraphError(
                        f"arc {a} is not frozen-negative but has length {w}; "
                        "potentials applied to this graph were invalid")
                pos[u].append((v, w, a))
        return pos, neg

    def forward(self):
        """``(pos_out, neg_out)``: per-vertex lists of ``(head, length, arc)``."""
        if self._fwd is None:
            self._fwd = self._adjacency(False)
        return self._fwd

    def reverse(self):
        """``(pos_in, neg_in)``: per-vertex lists of ``(tail, length, arc)``."""
        if self._rev is None:
            self._rev = self._adjacency(True)
        return self._rev

    def out_degrees(self):
        deg = [0] * self.n
        for u in self.tails:
            deg[u] += 1
        return deg

    def in_degrees(self):
        deg = [0] * self.n
        for v in self.heads:
            deg[v] += 1
        return deg

    def __eq__(self, other):
        if not isinstance(other, WeightedDigraph):
            return NotImplemented
        return (self.n == other.n and self.tails == other.tails
                and self.heads == other.heads and self.lengths == other.lengths
                and self.frozen == other.frozen)

    def __hash__(self):
        return hash((self.n, self.tails, self.heads, self.lengths))

    def __repr__(self):
        return f"WeightedDigraph(n={self.n}, m={self.m}, k={self.k})"


def build_graph(n: int, arcs: Iterable[Sequence], exact: bool = True) -> WeightedDigraph:
    """Build a graph from ``(tail, head, length)`` triples.

    Parallel arcs and self-loops are kept. With ``exact`` (the default)
    lengths must be integers; ``exact=False`` admits floats for
    benchmarking only.
    """
    if not isinstance(n, numbers.Integral) or n < 0:
        raise GraphError(f"vertex count must be a non-negative integer, got {n!r}")
    tails, heads, lengths = [], [], []
    for i, arc in enumerate(arcs):
        try:
            u, v, w = arc
        except (TypeError, ValueError):
            raise GraphError(f"arc {i} is not a (tail, head, length) triple: {arc!r}")
        if not (isinstance(u, numbers.Integral) and 0 <= u < n):
            raise GraphError(f"arc {i}: tail {u!r} out of range [0, {n})")
        if not (isinstance(v, numbers.Integral) and 0 <= v < n):
            raise GraphError(f"arc {i}: head {v!r} out of range [0, {n})")
        if exact:
            if isinstance(w, numbers.Integral):
                w = int(w)
            elif isinstance(w, numbers.Real) and float(w).is_integer():
                w = int(w)
            else:
                raise GraphError(f"arc {i}: length {w!r} is not an integer")
        elif not math.isfinite(w):
            raise GraphError(f"arc {i}: length {w!r} is not finite")
        tails.append(int(u))
        heads.append(int(v))
        lengths.append(w)
    return WeightedDigraph(int(n), tails, heads, lengths, exact=exact)


@dataclass(frozen=True)
class Walk:
    """An ordered arc list in ``graph``; hops count frozen-negative arcs."""

    graph: WeightedDigraph = field(repr=False, compare=False)
    arcs: tuple
    start: int | None = None
    length: int = field(init=False)
    hops: int = field(init=False)

    def __post_init__(self):
        g = self.graph
        arcs = tuple(self.arcs)
        object.__setattr__(self, "arcs", arcs)
        if arcs:
            if self.start is None:
                object.__setattr__(self, "start", g.tails[arcs[0]])
            elif self.start != g.tails[arcs[0]]:
                raise GraphError("walk start does not match its first arc")
        for a, b in zip(arcs, arcs[1:]):
            if g.heads[a] != g.tails[b]:
                raise GraphError(f"arcs {a} and {b} are not consecutive")
        object.__setattr__(self, "length", sum(g.lengths[a] for a in arcs))
        object.__setattr__(self, "hops", sum(1 for a in arcs if g.frozen[a]))

    @property
    def end(self):
        return self.graph.heads[self.arcs[-1]] if self.arcs else self.start

    def vertices(self):
        if not self.arcs:
            return [self.start]
        return [self.start] + [self.graph.heads[a] for a in self.arcs]

    def negative_vertices(self):
        """Tails of the hops, in walk order (with repetition)."""
        g = self.graph
        return [g.tails[a] for a in self.arcs if g.frozen[a]]

    def is_proper(self):
        nv = self.negative_vertices()
        return len(nv) == len(set(nv))

    def is_closed(self):
        return bool(self.arcs) and self.start == self.end

    def reweighted_length(self, potentials):
        phi = potentials.values if isinstance(potentials, PotentialVector) else potentials
        return self.length + phi[self.start] - phi[self.end]


@dataclass(frozen=True)
class PotentialVector:
    """Per-vertex reweighting values.

    ``negatives`` records the frozen negative set the vector was issued
    against, when known. Addition is pointwise, so applying ``p`` then
    ``q`` equals applying ``p + q``.
    """

    values: tuple
    negatives: frozenset | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        for x in self.values:
            if x is None or (isinstance(x, float) and not math.isfinite(x)):
                raise GraphError("potentials must be finite at every vertex")

    @classmethod
    def zeros(cls, n, negatives=None):
        return cls((0,) * n, negatives)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, v):
        return self.values[v]

    def __iter__(self):
        return iter(self.values)

    def __add__(self, other):
        if len(other) != len(self):
            raise ValueError("potential vectors have different sizes")
        return PotentialVector(tuple(a + b for a, b in zip(self.values, other)),
                               self.negatives)

    def minimum(self, other):
        return PotentialVector(tuple(map(min, self.values, other)), self.negatives)

    def maximum(self, other):
        return PotentialVector(tuple(map(max, self.values, other)), self.negatives)


def _values(potentials):
    if isinstance(potentials, PotentialVector):
        return potentials.values
    return potentials


def apply_potentials(G: WeightedDigraph, potentials) -> WeightedDigraph:
    """The reweighted view G_phi; the frozen negative set is unchanged."""
    phi = _values(potentials)
    if len(phi) != G.n:
        raise GraphError(f"need {G.n} potentials, got {len(phi)}")
    lengths = [w + phi[u] - phi[v] for u, v, w in zip(G.tails, G.heads, G.lengths)]
    return WeightedDigraph(G.n, G.tails, G.heads, lengths, G.frozen, exact=G.exact)


def check_validity(G: WeightedDigraph, potentials) -> bool:
    """True iff no frozen-nonnegative arc becomes negative under ``potentials``."""
    phi = _values(potentials)
    for u, v, w, f in zip(G.tails, G.heads, G.lengths, G.frozen):
        if not f and w + phi[u] - phi[v] < 0:
            return False
    return True


def neutralized(G: WeightedDigraph, potentials, vertices) -> bool:
    """True iff every frozen-negative arc out of ``vertices`` is nonnegative."""
    phi = _values(potentials)
    vertices = set(vertices)
    for a in G.negative_arcs:
        u = G.tails[a]
        if u in vertices and G.lengths[a] + phi[u] - phi[G.heads[a]] < 0:
            return False
    return True


def emit(G, potentials, origin):
    """Wrap ``potentials`` as a vector issued against ``G`` (audited in debug mode)."""
    if not isinstance(potentials, PotentialVector):
        potentials = PotentialVector(potentials, G.negative_vertices)
    return _debug.audit(G, potentials, origin)


def _filtered(G, keep):
    idx = [a for a in range(G.m) if keep(a)]
    return WeightedDigraph(G.n, [G.tails[a] for a in idx], [G.heads[a] for a in idx],
                           [G.lengths[a] for a in idx], [G.frozen[a] for a in idx],
                           idx, exact=G.exact)


def restrict_negatives(G: WeightedDigraph, U) -> WeightedDigraph:
    """G_U: keep every nonnegative arc and only the negative arcs of ``U``.

    Arcs are renumbered; ``arc_origin`` maps back to the arcs of ``G``.
    """
    U = frozenset(U)
    extra = U - G.negative_vertices
    if extra:
        raise GraphError(f"vertices {sorted(extra)} are not negative vertices")
    return _filtered(G, lambda a: not G.frozen[a] or G.tails[a] in U)


def positive_part(G: WeightedDigraph) -> WeightedDigraph:
    """G+ = G restricted to the empty negative set."""
    return restrict_negatives(G, ())


def induced_subgraph(G: WeightedDigraph, vertices) -> WeightedDigraph:
    """Arcs with both endpoints in ``vertices``; the vertex ids are kept."""
    inside = [False] * G.n
    for v in vertices:
        inside[v] = True
    return _filtered(G, lambda a: inside[G.tails[a]] and inside[G.heads[a]])


def lift_walk(walk: Walk, parent: WeightedDigraph) -> Walk:
    """The same walk expressed in the graph ``walk.graph`` was derived from.

    Only valid for one derivation step (restriction, induced subgraph or
    reweighting of ``parent``).
    """
    g = walk.graph
    if g is parent:
        return walk
    arcs = walk.arcs if g.arc_origin is None else [g.arc_origin[a] for a in walk.arcs]
    return Walk(parent, arcs, start=walk.start)


@dataclass(frozen=True)
class PreprocessMapping:
    """Correspondence between an input graph and its preprocessed form.

    Original vertex ``v`` keeps id ``v`` in the transformed graph.
    ``vertex_origin[x]`` is the original vertex a transformed vertex stands
    for (``None`` for the two fresh vertices isolating a negative arc), and
    ``arc_origin[a]`` is the original arc carried by transformed arc ``a``
    (``None`` for zero-length connector arcs).
    """

    n_original: int
    vertex_origin: tuple
    arc_origin: tuple

    def map_vertex(self, v):
        if not 0 <= v < self.n_original:
            raise GraphError(f"vertex {v} out of range [0, {self.n_original})")
        return v

    def project_vertex(self, x):
        return self.vertex_origin[x]

    def project_arcs(self, arcs):
        """Original arcs traversed by a walk given as transformed arc ids."""
        return [self.arc_origin[a] for a in arcs if self.arc_origin[a] is not None]


def _split(n, tails, heads, lengths, origin, vorigin, bound):
    """Split vertices of degree > ``bound`` into zero-length chains."""
    out_lists = [[] for _ in range(n)]
    in_lists = [[] for _ in range(n)]
    for a, (u, v) in enumerate(zip(tails, heads)):
        out_lists[u].append(a)
        in_lists[v].append(a)
    new_tail = list(tails)
    new_head = list(heads)
    extra_t, extra_h = [], []
    vorigin = list(vorigin)
    nxt = n

    for v in range(n):
        arcs = out_lists[v]
        if len(arcs) > bound:
            cur, i = v, 0
            while len(arcs) - i > bound:
                for a in arcs[i:i + bound - 1]:
                    new_tail[a] = cur
                i += bound - 1
                extra_t.append(cur)
                extra_h.append(nxt)
                vorigin.append(vorigin[v])
                cur = nxt
                nxt += 1
            for a in arcs[i:]:
                new_tail[a] = cur
        arcs = in_lists[v]
        if len(arcs) > bound:
            cur, i = v, 0
            while len(arcs) - i > bound:
                for a in arcs[i:i + bound - 1]:
                    new_head[a] = cur
                i += bound - 1
                extra_t.append(nxt)
                extra_h.append(cur)
                vorigin.append(vorigin[v])
                cur = nxt
                nxt += 1
            for a in arcs[i:]:
                new_head[a] = cur

    k = len(extra_t)
    return (nxt, new_tail + extra_t, new_head + extra_h, list(lengths) + [0] * k,
            list(origin) + [None] * k, vorigin)


def degree_bound(n, m):
    return -(-m // n) + 2 if n else 2


def preprocess(G: WeightedDigraph):
    """Isolate negative arcs and bound degrees, preserving all distances.

    Each negative arc ``(u, v, w)`` becomes ``u -> x : 0, x -> y : w,
    y -> v : 0`` with fresh ``x, y``. Vertices whose in- or out-degree
    exceeds ``ceil(m/n) + 2`` of the resulting graph are then split into
    zero-length chains. Returns ``(G', mapping)``.
    """
    n = G.n
    tails, heads, lengths, origin = [], [], [], []
    vorigin = list(range(n))
    for a in range(G.m):
        u, v, w = G.tails[a], G.heads[a], G.lengths[a]
        if G.frozen[a]:
            x, y = n, n + 1
            n += 2
            vorigin += [None, None]
            tails += [u, x, y]
            heads += [x, y, v]
            lengths += [0, w, 0]
            origin += [None, a, None]
        else:
            tails.append(u)
            heads.append(v)
            lengths.append(w)
            origin.append(a)

    base = (n, tails, heads, lengths, origin, vorigin)
    bound = degree_bound(n, len(tails))
    while True:
        res = _split(*base, bound)
        n2, t2, h2, _, _, _ = res
        target = degree_bound(n2, len(t2))
        deg_ok = True
        if t2:
            out_d = [0] * n2
            in_d = [0] * n2
            for u, v in zip(t2, h2):
                out_d[u] += 1
                in_d[v] += 1
            deg_ok = max(max(out_d), max(in_d)) <= target
        if deg_ok or bound <= 3:
            break
        bound = max(3, min(bound - 1, target))

    n2, t2, h2, l2, o2, vo2 = res
    out = WeightedDigraph(n2, t2, h2, l2, exact=G.exact)
    return out, PreprocessMapping(G.n, tuple(vo2), tuple(o2))


def is_preprocessed(G: WeightedDigraph) -> bool:
    """Check the structural invariants :func:`preprocess` establishes."""
    if G.m == 0:
        return True
    out_d, in_d = G.out_degrees(), G.in_degrees()
    bound = degree_bound(G.n, G.m)
    if max(out_d) > bound or max(in_d) > bound:
        return False
    for a in G.negative_arcs:
        if out_d[G.tails[a]] != 1 or in_d[G.heads[a]] != 1:
            return False
    return 2 * G.k <= G.n
