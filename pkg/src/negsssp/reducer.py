"""Hop reducers: auxiliary graphs whose few-hop distances stand in for many-hop ones.

Pipeline for a certified sandwich ``(s, U, t)``:

1. :func:`remotize` reweights so that ``U`` negatively reaches few vertices.
2. :func:`build_envelopes` forms the nested reach sets ``V_1 <= ... <= V_L``.
3. :func:`bootstrap_reducer` alternates :func:`reducer_from_estimates`
   (a reducer ``H_i`` for ``G_i`` from estimates of lower levels) and
   :func:`estimates_from_reducer` (estimates for level ``i`` from
   2-hop distances in ``H_i``) up to ``H_L``.
4. :func:`neutralize_via_reducer` reads Johnson potentials for G_U off a
   short hop computation in ``H_L``.

:func:`layered_reducer` is the simple layered construction, kept as an
independent cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .betweenness import SandwichCert, log2n
from .exceptions import (EnvelopeTooLarge, NegativeCycleError, RetryableFailure,
                         VerificationError)
from .graph import (PotentialVector, WeightedDigraph, Walk, check_validity, emit,
                    induced_subgraph, neutralized)
from .hops import SourceSpec, hop_distances, johnson, negative_reach
from . import _debug


def remotize(G: WeightedDigraph, cert: SandwichCert, h0: int | None = None) -> PotentialVector:
    """``phi(v) = min(d^h0(s, v), -d^h0(v, t))``, clamped below to stay finite.

    Unreachable on both sides would give ``-inf``; those vertices get a
    constant below every finite value instead, and taking the max with a
    constant keeps the potential valid.
    """
    h0 = cert.h0 if h0 is None else h0
    fw = hop_distances(G, SourceSpec.single(cert.s), h0)
    bw = hop_distances(G, SourceSpec.single(cert.t, reverse=True), h0)
    floor = -(G.n + h0 + 2) * (sum(abs(w) for w in G.lengths) + 1)
    phi = []
    for a, b in zip(fw.dist, bw.dist):
        if b is None:
            v = floor
        elif a is None:
            v = max(-b, floor)
        else:
            v = max(min(a, -b), floor)
        phi.append(v)
    return emit(G, PotentialVector(phi, G.negative_vertices), "remotize")


@dataclass
class EnvelopeFamily:
    """Nested vertex sets ``V_1..V_L`` with induced subgraphs and outgoing cuts.

    Lists are indexed by level; index 0 is unused.
    """

    graph: WeightedDigraph
    U: frozenset
    heads: frozenset
    h: int
    L: int
    sets: list
    subgraphs: list
    cuts: list

    def level_size(self, i):
        return len(self.sets[i])


def envelope_levels(h):
    return (math.ceil(math.log2(h)) if h > 1 else 0) + 1


def build_envelopes(GU: WeightedDigraph, U, h: int, slack=1.0) -> EnvelopeFamily:
    """``V_i = U | heads(U) | (2**i-hop negative reach of U)`` for ``i < L``, ``V_L = V``.

    With ``slack`` set, raises :class:`EnvelopeTooLarge` when some
    ``|V_i - U|`` exceeds ``slack * n * 2**i / h``.
    """
    U = frozenset(U)
    if not U <= GU.negative_vertices:
        raise ValueError("U must consist of negative vertices")
    if h < 1:
        raise ValueError("h must be positive")
    L = envelope_levels(h)
    heads = frozenset(GU.heads_of(U))
    n = GU.n
    sets, subs, cuts = [None], [None], [None]
    for i in range(1, L + 1):
        if i < L:
            V = frozenset(U | heads | negative_reach(GU, U, 2 ** i))
            if slack is not None and len(V - U) > slack * n * 2 ** i / h:
                raise EnvelopeTooLarge(
                    f"level {i} envelope has {len(V - U)} vertices outside U")
        else:
            V = frozenset(range(n))
        sets.append(V)
        subs.append(induced_subgraph(GU, V))
        cuts.append(tuple(a for a in range(GU.m)
                          if GU.tails[a] in V and GU.heads[a] not in V))
    return EnvelopeFamily(GU, U, heads, h, L, sets, subs, cuts)


@dataclass
class ReducerGraph:
    """Auxiliary graph over vertex copies ``(v, j)`` with tagged arcs.

    ``graph`` holds the raw lengths; ``reweighted`` applies ``potentials``
    and marks as hops exactly the arcs that stay negative (the self arcs
    for level > 1, the negative arcs of ``U`` at level 1). ``payload[a]``
    is the arc of G_U behind a base/exit/negative arc, ``(j, s, t)`` for a
    shortcut, and ``None`` for a self arc.
    """

    level: int
    graph: WeightedDigraph
    potentials: PotentialVector
    reweighted: WeightedDigraph
    copies: tuple
    index: dict
    kinds: tuple
    payload: tuple
    estimates: dict = field(default_factory=dict, repr=False)

    def base(self, v):
        return self.index[(v, self.level)]

    def count(self, kind):
        return sum(1 for k in self.kinds if k == kind)

    def project(self, walk: Walk, GU: WeightedDigraph) -> Walk:
        """The G_U walk behind a walk of this reducer (shortcuts expanded)."""
        arcs = []
        for a in walk.arcs:
            kind = self.kinds[a]
            if kind == "self":
                continue
            if kind == "shortcut":
                j, s, t = self.payload[a]
                arcs.extend(self.estimates[j].witness(s, t))
            else:
                arcs.append(self.payload[a])
        start = self.copies[walk.start][0]
        return Walk(GU, arcs, start=start)


def _assemble(copies, arcs):
    index = {c: x for x, c in enumerate(copies)}
    tails = [index[a[1]] for a in arcs]
    heads = [index[a[2]] for a in arcs]
    lens = [a[3] for a in arcs]
    kinds = tuple(a[0] for a in arcs)
    payload = tuple(a[4] for a in arcs)
    frozen = [k == "negative" for k in kinds]
    H = WeightedDigraph(len(copies), tails, heads, lens, frozen)
    return H, index, kinds, payload


def _reweighted(H, phi, kinds):
    lens = [w + phi[u] - phi[v] for u, v, w in zip(H.tails, H.heads, H.lengths)]
    frozen = [k == "negative" or (k == "self" and w < 0) for k, w in zip(kinds, lens)]
    return WeightedDigraph(H.n, H.tails, H.heads, lens, frozen)


def reducer_from_estimates(env: EnvelopeFamily, estimates: dict, i: int) -> ReducerGraph:
    """A ``2**(i-1)``-hop reducer for ``G_i`` from estimate tables of levels ``< i``."""
    GU = env.graph
    if i == 1:
        V = sorted(env.sets[1])
        copies = tuple((v, 1) for v in V)
        G1 = env.subgraphs[1]
        arcs = []
        for a in range(G1.m):
            o = G1.arc_origin[a]
            kind = "negative" if G1.frozen[a] else "base"
            arcs.append((kind, (G1.tails[a], 1), (G1.heads[a], 1), G1.lengths[a], o))
        H, index, kinds, payload = _assemble(copies, arcs)
        phi = emit(H, PotentialVector.zeros(H.n), "reducer-1")
        return ReducerGraph(1, H, phi, H, copies, index, kinds, payload, dict(estimates))

    copies = []
    for j in range(1, i + 1):
        copies.extend((v, j) for v in sorted(env.sets[j]))
    Vi = env.sets[i]
    arcs = []
    for j in range(1, i + 1):
        Gj = env.subgraphs[j]
        for a in range(Gj.m):
            if not Gj.frozen[a]:
                arcs.append(("base", (Gj.tails[a], j), (Gj.heads[a], j), Gj.lengths[a],
                             Gj.arc_origin[a]))
    for j in range(1, i):
        est = estimates[j]
        for (s, t), d in sorted(est.delta.items()):
            if d is not None:
                arcs.append(("shortcut", (s, i), (t, j), d, (j, s, t)))
        for a in env.cuts[j]:
            y = GU.heads[a]
            if y in Vi:
                arcs.append(("exit", (GU.tails[a], j), (y, i), GU.lengths[a], a))
        for v in sorted(env.sets[j]):
            arcs.append(("self", (v, j), (v, i), 0, None))
    copies = tuple(copies)
    H, index, kinds, payload = _assemble(copies, arcs)

    # H' drops the self arcs; its shortcut arcs are the hops
    keep = [a for a, k in enumerate(kinds) if k != "self"]
    Hp = WeightedDigraph(H.n, [H.tails[a] for a in keep], [H.heads[a] for a in keep],
                         [H.lengths[a] for a in keep],
                         [kinds[a] == "shortcut" for a in keep], keep)
    red = ReducerGraph(i, H, None, None, copies, index, kinds, payload, dict(estimates))
    try:
        phi = johnson(Hp, hop_budget=1, origin=f"reducer-{i}-aux")
    except NegativeCycleError as e:
        cyc = Walk(H, [keep[a] for a in e.cycle.arcs], start=e.cycle.start)
        proj = red.project(cyc, GU)
        if proj.is_closed() and proj.length < 0:
            raise NegativeCycleError(proj) from None
        raise RetryableFailure("estimates admit a spurious negative cycle") from None
    if phi is None:
        raise RetryableFailure(f"shortcut arcs at level {i} are not independent")
    if any(phi[index[(v, i)]] != 0 for v in Vi):
        raise RetryableFailure(f"base copies at level {i} received nonzero potential")
    # self arcs are the only arcs allowed to stay negative
    for a, k in enumerate(kinds):
        if k != "self" and H.lengths[a] + phi[H.tails[a]] - phi[H.heads[a]] < 0:
            raise VerificationError("reducer arc left negative")
    red.potentials = PotentialVector(phi.values)
    red.reweighted = _reweighted(H, phi.values, kinds)
    emit(red.reweighted, PotentialVector.zeros(H.n), f"reducer-{i}")
    return red


@dataclass
class EstimateTable:
    """Distance estimates ``delta[(s, t)]`` for ``s`` in U, ``t`` in heads(U) at one level.

    ``None`` marks a pair without an estimate (no shortcut arc).
    """

    level: int
    delta: dict
    lam: dict
    sample: tuple
    reducer: ReducerGraph = field(repr=False, default=None)
    _choice: dict = field(default_factory=dict, repr=False)
    _tables: dict = field(default_factory=dict, repr=False)
    _graph: WeightedDigraph = field(default=None, repr=False)

    def witness(self, s, t):
        """Arc list of a G_U walk from ``s`` to ``t`` inside ``G_level`` of length <= delta."""
        u = self._choice[(s, t)]
        to_u, from_u = self._tables[u]
        H = self.reducer
        w1 = to_u.walk_to(H.base(s))
        w2 = from_u.walk_to(H.base(t))
        p1 = H.project(w1, self._graph)
        p2 = H.project(w2, self._graph)
        return list(p1.arcs) + list(p2.arcs)

    def witness_walk(self, s, t):
        return Walk(self._graph, self.witness(s, t), start=s)


def sampling_probability(n, i, c_s=4):
    return min(1.0, c_s * log2n(n) / 2 ** i)


def estimates_from_reducer(H: ReducerGraph, env: EnvelopeFamily, U, i: int, rng,
                           c_s=4) -> EstimateTable:
    """Estimates at level ``i`` through sampled midpoints, floored by the exit bound."""
    U = sorted(U)
    heads = sorted(env.heads)
    GU = env.graph
    p = sampling_probability(GU.n, i, c_s)
    U0 = tuple(U) if p >= 1 else tuple(u for u in U if rng.random() < p)

    # lam(t) = min over cut arcs (x, y) of d0_i(t, x) + len(x, y)
    pairs = [(GU.tails[a], GU.lengths[a]) for a in env.cuts[i]]
    lam = {t: None for t in heads}
    if pairs:
        lt = hop_distances(env.subgraphs[i], SourceSpec.from_pairs(pairs, reverse=True), 0)
        lam = {t: lt.dist[t] for t in heads}

    R = H.reweighted
    base_s = [H.base(s) for s in U]
    base_t = [H.base(t) for t in heads]
    best = {}
    choice = {}
    tables = {}
    for u in U0:
        bu = H.base(u)
        to_u = hop_distances(R, SourceSpec({bu: 0}, reverse=True), 2, keep_rounds=True)
        from_u = hop_distances(R, SourceSpec.single(bu), 2, keep_rounds=True)
        tables[u] = (to_u, from_u)
        right = [from_u.dist[b] for b in base_t]
        for s, bs in zip(U, base_s):
            a = to_u.dist[bs]
            if a is None:
                continue
            for t, b in zip(heads, right):
                if b is None:
                    continue
                c = a + b
                key = (s, t)
                cur = best.get(key)
                if cur is None or c < cur:
                    best[key] = c
                    choice[key] = u
    delta = {}
    for s in U:
        for t in heads:
            c = best.get((s, t))
            if c is None:
                delta[(s, t)] = None
            else:
                lt = lam[t]
                delta[(s, t)] = c if lt is None else max(c, -lt)
    table = EstimateTable(i, delta, lam, U0, H, choice, tables, GU)
    check_estimate_table(table, env)
    return table


def check_estimate_table(table: EstimateTable, env: EnvelopeFamily, full=None):
    """Deterministic properties of an estimate table.

    The exit bound is always checked. The upper-bound property (each
    estimate is at least the true distance in ``G_i``) is certified by
    rebuilding each witness walk; that runs when auditing is enabled or
    ``full`` is true.
    """
    for (s, t), d in table.delta.items():
        lt = table.lam.get(t)
        if d is not None and lt is not None and d + lt < 0:
            raise VerificationError(f"estimate for {(s, t)} violates the exit bound")
    if full is None:
        full = _debug.enabled()
    if not full:
        return
    Vi = env.sets[table.level]
    for (s, t), d in table.delta.items():
        if d is None:
            continue
        w = table.witness_walk(s, t)
        if w.end != t or w.length > d or not set(w.vertices()) <= Vi:
            raise VerificationError(f"estimate for {(s, t)} lacks a witness walk")


def bootstrap_reducer(GU: WeightedDigraph, U, h: int, rng, c_s=4, env=None,
                      slack=None) -> ReducerGraph:
    """An ``h``-hop reducer for G_U by alternating reducers and estimates."""
    U = frozenset(U)
    if env is None:
        env = build_envelopes(GU, U, h, slack=slack)
    estimates = {}
    H = None
    for i in range(1, env.L + 1):
        H = reducer_from_estimates(env, estimates, i)
        if i < env.L:
            estimates[i] = estimates_from_reducer(H, env, U, i, rng, c_s)
    return H


def neutralize_via_reducer(GU: WeightedDigraph, U, H: ReducerGraph, h: int) -> PotentialVector:
    """Johnson potentials for G_U from ``ceil(|U| / h)`` hop rounds in the reducer."""
    U = frozenset(U)
    if not U:
        return emit(GU, PotentialVector.zeros(GU.n, GU.negative_vertices), "reducer-psi")
    rounds = -(-len(U) // max(h, 1))
    sources = SourceSpec({H.base(v): 0 for v in range(GU.n)})
    t = hop_distances(H.reweighted, sources, rounds)
    psi = [t.dist[H.base(v)] for v in range(GU.n)]
    if not check_validity(GU, psi) or not neutralized(GU, psi, U):
        raise RetryableFailure("reducer potentials do not neutralize U")
    return emit(GU, PotentialVector(psi, GU.negative_vertices), "reducer-psi")


def layered_reducer(GU: WeightedDigraph, U, r: int) -> ReducerGraph:
    """The layered ``r``-hop reducer (cross-check; not used by the solver).

    Layer 0 is all of G+; layers ``1..r`` copy G_X+ for ``X = U | heads(U) |
    r-hop negative reach``. Negative arcs step one layer up, self arcs step
    up and wrap from layer ``r`` back to 0, and arcs leaving ``X`` exit to
    layer 0. Potentials ``d^i(V, v)`` leave only wrap-around arcs negative.
    """
    U = frozenset(U)
    if r < 1:
        raise ValueError("r must be positive")
    n = GU.n
    heads = GU.heads_of(U)
    X = frozenset(U | heads | negative_reach(GU, U, r))
    table = hop_distances(GU, SourceSpec.everything(n), r, keep_rounds=True)
    copies = [(v, 0) for v in range(n)]
    for i in range(1, r + 1):
        copies.extend((v, i) for v in sorted(X))
    arcs = []
    for a in range(GU.m):
        x, y, w = GU.tails[a], GU.heads[a], GU.lengths[a]
        if GU.frozen[a]:
            for i in range(r):
                if i == 0 or x in X:
                    arcs.append(("negative", (x, i), (y, i + 1), w, a))
            continue
        arcs.append(("base", (x, 0), (y, 0), w, a))
        if x in X:
            for i in range(1, r + 1):
                if y in X:
                    arcs.append(("base", (x, i), (y, i), w, a))
                else:
                    arcs.append(("exit", (x, i), (y, 0), w, a))
    for v in sorted(X):
        arcs.append(("self", (v, 0), (v, 1), 0, None))
        for i in range(1, r):
            arcs.append(("self", (v, i), (v, i + 1), 0, None))
        arcs.append(("self", (v, r), (v, 0), 0, None))
    H, index, kinds, payload = _assemble(tuple(copies), arcs)
    phi = [table.value(v, j) for (v, j) in copies]
    lens = [w + phi[u] - phi[v] for u, v, w in zip(H.tails, H.heads, H.lengths)]
    frozen = [w < 0 for w in lens]
    for a, w in enumerate(lens):
        if w < 0 and not (kinds[a] == "self" and copies[H.tails[a]][1] == r):
            raise VerificationError("layered reducer arc left negative")
    R = WeightedDigraph(H.n, H.tails, H.heads, lens, frozen)
    # level 0 makes base() address layer 0
    return ReducerGraph(0, H, PotentialVector(phi), R, tuple(copies), index, kinds, payload)


def dump_reducer(H: ReducerGraph) -> str:
    """Line-oriented text form of a reducer.

    ::

        reducer level=<i> vertices=<n> arcs=<m>
        vertex <id> <v> <copy-level> <potential>
        arc <id> <kind> <tail-id> <head-id> <length> <reweighted-length> <hop:0|1>
    """
    G, R = H.graph, H.reweighted
    out = [f"reducer level={H.level} vertices={G.n} arcs={G.m}"]
    for x, (v, j) in enumerate(H.copies):
        out.append(f"vertex {x} {v} {j} {H.potentials[x]}")
    for a in range(G.m):
        out.append(f"arc {a} {H.kinds[a]} {G.tails[a]} {G.heads[a]} {G.lengths[a]} "
                   f"{R.lengths[a]} {int(R.frozen[a])}")
    return "\n".join(out) + "\n"
