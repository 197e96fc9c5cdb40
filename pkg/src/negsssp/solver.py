"""Top-level negative-weight single-source shortest paths.

The graph is preprocessed, then repeatedly reweighted: each round snapshots
the current negative arcs, neutralizes a batch of them with valid
potentials, and adds those potentials to the running total. When no
negative arc is left one Dijkstra pass gives the distances.

A round picks hop and sampling parameters from the regime, samples a set
``S`` of negative vertices and probes it. Either ``S`` is neutralized
outright, or the probe finds a proper negative pair, whose weak sandwich
``U`` is remotized and neutralized through a bootstrapped hop reducer
(or by plain Johnson when ``U`` is below the reducer's size floor). Every
randomized step is checked; failures are retried and, past the retry cap,
one negative vertex is neutralized directly so progress is guaranteed.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field

from . import hops
from .betweenness import (Neutralized, Sandwich, base_hops, log2n, multiscale_reduce,
                          sample_negatives, sandwich_probe, sparse_multiscale_reduce)
from .exceptions import EnvelopeTooLarge, NegativeCycleError, RetryableFailure, VerificationError
from .graph import (PotentialVector, WeightedDigraph, Walk, apply_potentials, check_validity,
                    emit, lift_walk, neutralized, preprocess, restrict_negatives)
from .hops import SourceSpec, hop_distances, johnson
from .proper import NegativeCycle
from .reducer import bootstrap_reducer, build_envelopes, neutralize_via_reducer, remotize
from .results import IterationReport, SolveResult, verify


@dataclass
class SolverConfig:
    """Constants and switches of the randomized solver.

    ``k_min`` defaults to ``ceil(log2(n)**2)``. ``regime`` is ``auto``,
    ``dense`` or ``sparse``. ``lazy_betweenness`` skips the star-based
    betweenness reduction until an envelope turns out too large;
    ``full_multiscale`` uses stars on every vertex instead of only on the
    sample. ``u_floor_mult`` scales the sandwich size below which plain
    Johnson replaces the reducer. ``envelope_slack`` scales the envelope
    size check (``None`` turns it off).
    """

    c0: int = 3
    c_r: float = 4
    c_s: float = 4
    smallness: float = 0.125
    retry_cap: int = 8
    k_min: int | None = None
    regime: str = "auto"
    seed: int | None = 0
    lazy_betweenness: bool = True
    full_multiscale: bool = False
    u_floor_mult: float = 1.0
    envelope_slack: float | None = 1.0
    trim_divisor: float = 4

    def __post_init__(self):
        for name in ("c0", "c_r", "c_s", "smallness", "retry_cap", "trim_divisor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.k_min is not None and self.k_min < 0:
            raise ValueError("k_min must be non-negative")
        if self.regime not in ("auto", "dense", "sparse"):
            raise ValueError("regime must be auto, dense or sparse")
        if self.u_floor_mult < 0:
            raise ValueError("u_floor_mult must be non-negative")

    @classmethod
    def from_mapping(cls, values):
        """Build from string-ish key/value pairs (CLI ``--config k=v`` or a file)."""
        known = {f: t for f, t in cls.__annotations__.items()}
        kwargs = {}
        for key, raw in values.items():
            if key not in known:
                raise ValueError(f"unknown config key {key!r}")
            kwargs[key] = _coerce(key, raw)
        return cls(**kwargs)

    def as_dict(self):
        return asdict(self)


_INTS = {"c0", "retry_cap", "k_min", "seed"}
_BOOLS = {"lazy_betweenness", "full_multiscale"}
_STRS = {"regime"}


def _coerce(key, raw):
    if not isinstance(raw, str):
        return raw
    if raw.lower() in ("none", "null"):
        return None
    if key in _BOOLS:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"{key} expects a boolean, got {raw!r}")
    if key in _STRS:
        return raw
    if key in _INTS:
        return int(raw)
    return float(raw)


def parameters(n, m, k, cfg: SolverConfig):
    """``(regime, h, q, h0)`` for a round with ``k`` negative vertices."""
    lg = log2n(n)
    llg = max(1.0, math.log2(lg))
    mu = m + n * lg
    regime = cfg.regime
    if regime == "auto":
        regime = "sparse" if mu <= k ** 1.25 * llg ** 2 / lg ** 0.75 else "dense"
    if regime == "sparse":
        h = (mu * lg ** 2 / llg ** 2) ** 0.2
        q = math.sqrt(mu / (h * llg ** 2))
    else:
        h = k ** 0.25 * lg ** 0.25
        q = math.sqrt(k / lg)
    h0 = base_hops(n, cfg.c0)
    h = max(h0, math.ceil(h))
    q = min(max(q, 1.0), float(k))
    return regime, h, q, h0


def cleanup_threshold(n, cfg: SolverConfig):
    if cfg.k_min is not None:
        return cfg.k_min
    return math.ceil(log2n(n) ** 2)


def _walk_in(G, walk, via=None):
    """Re-anchor a cycle found in a graph derived from ``G`` (same or local arc ids)."""
    if via is not None:
        walk = lift_walk(walk, via)
    return Walk(G, walk.arcs, start=walk.start)


def _attempt(G, cfg, rng, h, q, h0, report):
    """One randomized try. Returns ``(potentials, neutralized set)``."""
    k = G.k
    n = G.n
    S = sample_negatives(G, q, rng)
    if len(S) < max(1, math.floor(k / (2 * q))):
        raise RetryableFailure(f"sample too small ({len(S)})")
    report.sample_size = len(S)

    phi1 = PotentialVector.zeros(n, G.negative_vertices)
    G1 = G
    reduced = False
    repaired = set()
    repairs = 0

    def reduce():
        if cfg.full_multiscale:
            red = multiscale_reduce(G, h, rng, cfg.c0, cfg.c_r)
        else:
            red = sparse_multiscale_reduce(G, h, S, rng, cfg.c0, cfg.c_r)
        return red.potentials, apply_potentials(G, red.potentials)

    if not cfg.lazy_betweenness:
        phi1, G1 = reduce()
        reduced = True

    while True:
        out = sandwich_probe(G1, q, h0, rng, S=S)
        if isinstance(out, NegativeCycle):
            raise NegativeCycleError(_walk_in(G, out.walk))
        if isinstance(out, Neutralized):
            report.path = "neutralized"
            phi = phi1 + out.potentials
            extra = {x for x in repaired if neutralized(G, phi, {x})}
            return phi, S | extra
        assert isinstance(out, Sandwich)
        cert = out.cert
        report.sandwich_size = len(cert.U)
        if len(cert.U) <= cfg.smallness * q * h0:
            if reduced or repairs >= cfg.retry_cap:
                raise RetryableFailure(f"sandwich too small ({len(cert.U)})")
            # no betweenness reduction yet, so small sandwiches are expected:
            # neutralize this one and probe the same sample again
            try:
                chi = johnson(restrict_negatives(G1, cert.U), origin="repair")
            except NegativeCycleError as e:
                raise NegativeCycleError(_walk_in(G, e.cycle, via=G1)) from None
            phi1 = phi1 + chi
            G1 = apply_potentials(G1, chi)
            repaired |= cert.U
            repairs += 1
            report.repairs += 1
            continue
        cert = cert.trimmed(math.ceil(q * h0 / cfg.trim_divisor))
        psi = remotize(G1, cert)
        G2 = apply_potentials(G1, psi)
        U = cert.U
        GU = restrict_negatives(G2, U)
        lg = log2n(n)
        floor = cfg.u_floor_mult * (lg ** 2 + h / lg ** 2)
        try:
            if len(U) < floor:
                report.path = "sandwich"
                chi = johnson(GU, origin="sandwich-johnson")
            else:
                try:
                    env = build_envelopes(GU, U, h, slack=cfg.envelope_slack)
                except EnvelopeTooLarge:
                    if reduced:
                        raise
                    phi1, G1 = reduce()
                    reduced = True
                    continue
                report.path = "reducer"
                H = bootstrap_reducer(GU, U, h, rng, cfg.c_s, env=env)
                chi = neutralize_via_reducer(GU, U, H, h)
        except NegativeCycleError as e:
            raise NegativeCycleError(_walk_in(G, e.cycle, via=G2)) from None
        return phi1 + psi + chi, U


def neutralize_round(G: WeightedDigraph, cfg: SolverConfig, rng):
    """Valid potentials for ``G`` and the set of negative vertices they neutralize.

    Returns ``(potentials, neutralized, report)``; raises
    :class:`NegativeCycleError` with a cycle of ``G``.
    """
    t0 = time.perf_counter()
    c0 = dict(hops.counters)
    k = G.k
    n = G.n
    report = IterationReport(regime="none", k=k)
    if k == 0:
        return PotentialVector.zeros(n, frozenset()), frozenset(), report

    if k <= cleanup_threshold(n, cfg):
        report.regime = "cleanup"
        report.path = "cleanup"
        phi = johnson(G, origin="cleanup")
        done = G.negative_vertices
    else:
        regime, h, q, h0 = parameters(n, G.m, k, cfg)
        report.regime, report.h, report.q = regime, h, q
        phi = done = None
        for attempt in range(cfg.retry_cap):
            try:
                phi, done = _attempt(G, cfg, rng, h, q, h0, report)
                break
            except RetryableFailure:
                report.retries += 1
        if phi is None:
            report.path = "fallback"
            v = min(G.negative_vertices)
            Gv = restrict_negatives(G, {v})
            try:
                phi = johnson(Gv, origin="fallback")
            except NegativeCycleError as e:
                raise NegativeCycleError(_walk_in(G, e.cycle, via=G)) from None
            phi = emit(G, phi, "fallback")
            done = frozenset({v})

    if not check_validity(G, phi) or not neutralized(G, phi, done):
        raise VerificationError("round produced potentials that do not neutralize its set")
    report.neutralized = len(done)
    report.pops = hops.counters["pops"] - c0["pops"]
    report.relaxations = hops.counters["relaxations"] - c0["relaxations"]
    report.seconds = time.perf_counter() - t0
    return emit(G, phi, "round"), frozenset(done), report


def _snapshot(base: WeightedDigraph, phi):
    """``base`` reweighted by ``phi`` with the negative arcs re-frozen."""
    lens = [w + phi[u] - phi[v] for u, v, w in zip(base.tails, base.heads, base.lengths)]
    return WeightedDigraph(base.n, base.tails, base.heads, lens, exact=base.exact)


@dataclass
class _Run:
    graph: WeightedDigraph
    mapping: object
    potentials: PotentialVector | None
    cycle: Walk | None
    reports: list = field(default_factory=list)


def _potentials(G: WeightedDigraph, cfg: SolverConfig) -> _Run:
    Gp, mapping = preprocess(G)
    rng = random.Random(cfg.seed)
    total = PotentialVector.zeros(Gp.n, Gp.negative_vertices)
    reports = []
    cur = Gp
    while cur.k:
        try:
            phi, done, rep = neutralize_round(cur, cfg, rng)
        except NegativeCycleError as e:
            arcs = mapping.project_arcs(e.cycle.arcs)
            cyc = Walk(G, arcs, start=G.tails[arcs[0]])
            if not cyc.is_closed() or cyc.length >= 0:
                raise VerificationError("cycle did not survive projection") from None
            return _Run(Gp, mapping, None, cyc, reports)
        reports.append(rep)
        total = total + phi
        emit(Gp, total, "accumulated")
        cur = _snapshot(Gp, total)
    return _Run(Gp, mapping, total, None, reports)


def _tree(G, Gp, mapping, dist_p, parent_p, s):
    """Distances and parent arcs of ``G`` from the preprocessed tree."""
    n = G.n
    dist = [dist_p[v] for v in range(n)]
    last = [None] * Gp.n      # original arc entering x on its tree path
    parent = [-1] * n
    origin = mapping.arc_origin
    for v in range(n):
        if dist[v] is None or v == s:
            continue
        chain = []
        x = v
        while last[x] is None:
            a = parent_p[x]
            if origin[a] is not None:
                last[x] = origin[a]
                break
            chain.append(x)
            x = Gp.tails[a]
        for y in chain:
            last[y] = last[x]
        parent[v] = last[v]
    return dist, parent


def solve(G: WeightedDigraph, s: int, cfg: SolverConfig | None = None) -> SolveResult:
    """Distances from ``s`` with a shortest-path tree, or a negative cycle."""
    cfg = cfg or SolverConfig()
    if not 0 <= s < G.n:
        raise ValueError(f"source {s} out of range")
    t0 = time.perf_counter()
    c0 = dict(hops.counters)
    run = _potentials(G, cfg)
    counters = {"iterations": len(run.reports),
                "retries": sum(r.retries for r in run.reports)}
    if run.cycle is not None:
        res = SolveResult(G, s, cycle=run.cycle, reports=run.reports, counters=counters)
    else:
        Gp, mapping, total = run.graph, run.mapping, run.potentials
        sp = mapping.map_vertex(s)
        final = _snapshot(Gp, total)
        if final.k:
            raise VerificationError("negative arcs left after the last round")
        t = hop_distances(final, SourceSpec.single(sp), 0)
        dist_p = [None if d is None else d - total[sp] + total[v] for v, d in enumerate(t.dist)]
        dist, parent = _tree(G, Gp, mapping, dist_p, t.parent, s)
        phi = PotentialVector(total.values[:G.n], G.negative_vertices)
        res = SolveResult(G, s, dist=dist, parent=parent, potentials=phi,
                          reports=run.reports, counters=counters)
    counters["pops"] = hops.counters["pops"] - c0["pops"]
    counters["relaxations"] = hops.counters["relaxations"] - c0["relaxations"]
    counters["seconds"] = time.perf_counter() - t0
    if not verify(G, res):
        raise VerificationError("solver output failed verification")
    return res
