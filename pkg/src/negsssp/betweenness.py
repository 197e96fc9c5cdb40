"""Betweenness reduction by sampled star constraints, and the sandwich probe.

Multiscale reduction samples vertex sets ``R_i`` at levels ``i = 0..L``
(``L = ceil(log2 h)``), smaller sets for larger hop budgets
``eta_i = 2**i + c0 * ceil(log2 n)``. Every sampled ``r`` gets star arcs
``v -> r`` and ``r -> v`` whose lengths are the ``eta_i``-hop distances
in G. Johnson potentials of G+ plus the stars are valid for G and make
every sampled pair nonnegative within the level's hop budget, which
pushes the betweenness of all pairs down. The sparse variant only adds
stars between the samples and a given vertex set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .exceptions import NegativeCycleError, VerificationError
from .graph import PotentialVector, WeightedDigraph, Walk, emit, neutralized
from .hops import SourceSpec, hop_distances, johnson
from .proper import Distances, NegativeCycle, ProperPair, probe


def log2n(n):
    return math.log2(max(n, 2))


def clog2(x):
    return max(1, math.ceil(math.log2(max(x, 2))))


def base_hops(n, c0=3):
    """Sandwich hop parameter ``c0 * ceil(log2 n)``."""
    return c0 * clog2(n)


@dataclass(frozen=True)
class MultiscaleSamples:
    levels: tuple          # levels[i] = tuple of sampled vertices (with repetition)
    etas: tuple            # hop budget per level

    @property
    def L(self):
        return len(self.levels) - 1

    def distinct(self):
        """``{r: largest hop budget of a level that sampled r}``."""
        best = {}
        for eta, R in zip(self.etas, self.levels):
            for r in R:
                if best.get(r, -1) < eta:
                    best[r] = eta
        return best


def draw_samples(n: int, h: int, rng, c0=3, c_r=4) -> MultiscaleSamples:
    L = math.ceil(math.log2(h)) if h > 1 else 0
    lg = log2n(n)
    levels, etas = [], []
    for i in range(L + 1):
        size = math.ceil(c_r * 2 ** (L - i) * lg)
        levels.append(tuple(rng.randrange(n) for _ in range(size)))
        etas.append(2 ** i + c0 * clog2(n))
    return MultiscaleSamples(tuple(levels), tuple(etas))


@dataclass
class StarReduction:
    """Potentials of a (sparse) multiscale reduction plus what produced them."""

    potentials: PotentialVector
    samples: MultiscaleSamples
    targets: frozenset | None
    aux_arcs: int = 0


def _star_lengths(G, samples, targets):
    """Per sampled ``r``: ``{v: (d(r, v), d(v, r))}`` at the largest budget of ``r``.

    Runs from whichever side is smaller: from each sample, or (sparse case)
    from each target. Also returns a function rebuilding the witness walk
    of any star arc.
    """
    best = samples.distinct()
    n = G.n
    out = {r: {} for r in best}
    tables = {}

    from_samples = targets is None or len(best) <= len(targets)
    if from_samples:
        tv = range(n) if targets is None else sorted(targets)
        for r, eta in sorted(best.items()):
            fw = hop_distances(G, SourceSpec.single(r), eta, keep_rounds=True)
            bw = hop_distances(G, SourceSpec.single(r, reverse=True), eta, keep_rounds=True)
            tables[r] = (fw, bw)
            row = out[r]
            for v in tv:
                row[v] = (fw.dist[v], bw.dist[v])

        def witness(r, v, outgoing):
            fw, bw = tables[r]
            return fw.walk_to(v) if outgoing else bw.walk_to(v)
    else:
        eta_max = max(best.values())
        for v in sorted(targets):
            fw = hop_distances(G, SourceSpec.single(v), eta_max, keep_rounds=True)
            bw = hop_distances(G, SourceSpec.single(v, reverse=True), eta_max,
                               keep_rounds=True)
            tables[v] = (fw, bw)
            for r, eta in best.items():
                out[r][v] = (bw.value(r, eta), fw.value(r, eta))

        def witness(r, v, outgoing):
            fw, bw = tables[v]
            eta = best[r]
            return bw.walk_to(r, eta) if outgoing else fw.walk_to(r, eta)
    return out, witness


def _reduce(G: WeightedDigraph, h: int, rng, targets, c0, c_r, origin):
    samples = draw_samples(G.n, h, rng, c0, c_r)
    lengths, witness = _star_lengths(G, samples, targets)

    tails, heads, lens, frozen, tags = [], [], [], [], []
    for a in range(G.m):
        if not G.frozen[a]:
            tails.append(G.tails[a])
            heads.append(G.heads[a])
            lens.append(G.lengths[a])
            frozen.append(False)
            tags.append(("g", a))
    for r in sorted(lengths):
        for v, (d_rv, d_vr) in sorted(lengths[r].items()):
            if d_rv is not None:
                tails.append(r)
                heads.append(v)
                lens.append(d_rv)
                frozen.append(d_rv < 0)
                tags.append(("out", r, v))
            if d_vr is not None:
                tails.append(v)
                heads.append(r)
                lens.append(d_vr)
                frozen.append(d_vr < 0)
                tags.append(("in", r, v))
    aux = WeightedDigraph(G.n, tails, heads, lens, frozen, exact=G.exact)
    try:
        phi = johnson(aux, cycle_bound=min(aux.k, 2 * len(lengths)),
                      origin=origin + "-aux")
    except NegativeCycleError as e:
        raise NegativeCycleError(_project_cycle(G, e.cycle, tags, witness)) from None
    values = phi.values
    # star condition, asserted per sampled pair
    for r, row in lengths.items():
        for v, (d_rv, d_vr) in row.items():
            if d_rv is not None and d_rv + values[r] - values[v] < 0:
                raise VerificationError("star condition failed")
            if d_vr is not None and d_vr + values[v] - values[r] < 0:
                raise VerificationError("star condition failed")
    pv = emit(G, PotentialVector(values, G.negative_vertices), origin)
    return StarReduction(pv, samples, None if targets is None else frozenset(targets),
                         aux.m - sum(1 for t in tags if t[0] == "g"))


def _project_cycle(G, cyc, tags, witness):
    arcs = []
    for a in cyc.arcs:
        tag = tags[a]
        if tag[0] == "g":
            arcs.append(tag[1])
        else:
            _, r, v = tag
            arcs.extend(witness(r, v, tag[0] == "out").arcs)
    walk = Walk(G, arcs, start=cyc.start) if arcs else None
    if walk is None or not walk.is_closed() or walk.length >= 0:
        raise VerificationError("star cycle did not project to a negative cycle")
    return walk


def multiscale_reduce(G: WeightedDigraph, h: int, rng, c0=3, c_r=4) -> StarReduction:
    """Valid potentials pushing ``(eta + c0 log n)``-hop betweenness towards ``n eta / h``."""
    return _reduce(G, h, rng, None, c0, c_r, "multiscale")


def sparse_multiscale_reduce(G: WeightedDigraph, h: int, S, rng, c0=3, c_r=4) -> StarReduction:
    """As :func:`multiscale_reduce` with stars only between the samples and ``S``."""
    return _reduce(G, h, rng, frozenset(S), c0, c_r, "sparse-multiscale")


def betweenness_count(G: WeightedDigraph, s: int, t: int, h: int) -> int:
    """Number of vertices ``v`` with ``d^h(s, v) + d^h(v, t) < 0``."""
    fw = hop_distances(G, SourceSpec.single(s), h)
    bw = hop_distances(G, SourceSpec.single(t, reverse=True), h)
    return sum(1 for a, b in zip(fw.dist, bw.dist)
               if a is not None and b is not None and a + b < 0)


@dataclass(frozen=True)
class SandwichCert:
    """Weak negative sandwich: ``d^h0(s, u) + d^h0(u, t) <= 0`` for every ``u`` in ``U``."""

    s: int
    t: int
    U: frozenset
    h0: int
    sums: tuple = field(default=(), compare=False, repr=False)   # (u, sum) pairs

    def trimmed(self, size):
        """Keep the ``size`` members with the lowest sums (ties by vertex id)."""
        if len(self.U) <= size:
            return self
        keep = sorted(self.sums, key=lambda p: (p[1], p[0]))[:size]
        return SandwichCert(self.s, self.t, frozenset(u for u, _ in keep), self.h0,
                            tuple(keep))


def sandwich_set(G: WeightedDigraph, s: int, t: int, h0: int) -> SandwichCert:
    fw = hop_distances(G, SourceSpec.single(s), h0)
    bw = hop_distances(G, SourceSpec.single(t, reverse=True), h0)
    sums = []
    for x in sorted(G.negative_vertices):
        a, b = fw.dist[x], bw.dist[x]
        if a is not None and b is not None and a + b <= 0:
            sums.append((x, a + b))
    return SandwichCert(s, t, frozenset(x for x, _ in sums), h0, tuple(sums))


def verify_sandwich(G: WeightedDigraph, cert: SandwichCert) -> bool:
    fw = hop_distances(G, SourceSpec.single(cert.s), cert.h0)
    bw = hop_distances(G, SourceSpec.single(cert.t, reverse=True), cert.h0)
    for u in cert.U:
        a, b = fw.dist[u], bw.dist[u]
        if a is None or b is None or a + b > 0:
            return False
    return cert.U <= G.negative_vertices


@dataclass(frozen=True)
class Neutralized:
    potentials: PotentialVector
    S: frozenset


@dataclass(frozen=True)
class Sandwich:
    cert: SandwichCert
    S: frozenset
    pair: ProperPair


def sample_negatives(G: WeightedDigraph, q, rng) -> frozenset:
    p = 1.0 / q
    return frozenset(x for x in sorted(G.negative_vertices) if rng.random() < p)


def sandwich_probe(G: WeightedDigraph, q, h0: int, rng, S=None):
    """Sample ``S`` at rate ``1/q`` and probe it with ``h0`` hops.

    Returns :class:`~negsssp.proper.NegativeCycle`, :class:`Neutralized`
    (potentials valid for G that neutralize all of ``S``) or
    :class:`Sandwich` (a certified weak sandwich around a proper pair).
    """
    if S is None:
        S = sample_negatives(G, q, rng)
    S = frozenset(S)
    out = probe(G, S, h0)
    if isinstance(out, NegativeCycle):
        return out
    if isinstance(out, Distances):
        phi = emit(G, out.values, "sandwich-probe")
        if not neutralized(G, phi, S):
            raise VerificationError("probe distances left a sampled arc negative")
        return Neutralized(phi, S)
    assert isinstance(out, ProperPair)
    cert = sandwich_set(G, out.s, out.t, h0)
    if out.s not in cert.U or out.t not in cert.U:
        raise VerificationError("sandwich does not contain its own endpoints")
    return Sandwich(cert, S, out)
