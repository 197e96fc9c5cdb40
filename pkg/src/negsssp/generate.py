"""Seeded random instances."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import WeightedDigraph, build_graph

MODES = ("uniform", "shifted", "planted")
ALIASES = {"planted-cycle": "planted"}


@dataclass(frozen=True)
class InstanceSpec:
    """``uniform``: lengths in ``[-W/2, -1]`` with probability ``neg_fraction``,
    else in ``[0, W]``. ``shifted``: ``w + pi(u) - pi(v)`` with ``w`` and the
    hidden ``pi`` uniform in ``[0, W/2]``, so no negative cycle exists.
    ``planted``: ``shifted`` plus one cycle of total length -1.

    With ``negatives`` set, shifted and planted instances get exactly that
    many negative arcs (outside the planted cycle) and
    ``neg_fraction`` is ignored.
    """

    mode: str = "shifted"
    n: int = 10
    m: int = 30
    neg_fraction: float = 0.25
    W: int = 16
    seed: int = 0
    negatives: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", ALIASES.get(self.mode, self.mode))
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.n < 1 or self.m < 0 or self.W < 2:
            raise ValueError("need n >= 1, m >= 0, W >= 2")
        if not 0 <= self.neg_fraction <= 1:
            raise ValueError("neg_fraction must lie in [0, 1]")
        if self.negatives is not None and not 0 <= self.negatives <= self.m:
            raise ValueError("negatives must lie in [0, m]")


def _endpoints(rng, n):
    u = rng.randrange(n)
    if n == 1:
        return u, u
    v = rng.randrange(n - 1)
    return u, v + (v >= u)


def generate(spec: InstanceSpec) -> WeightedDigraph:
    rng = random.Random(spec.seed)
    n, m, W = spec.n, spec.m, spec.W
    half = W // 2
    arcs = []
    if spec.mode == "uniform":
        for _ in range(m):
            u, v = _endpoints(rng, n)
            if rng.random() < spec.neg_fraction:
                w = rng.randint(-half, -1)
            else:
                w = rng.randint(0, W)
            arcs.append((u, v, w))
        return build_graph(n, arcs)

    pi = [rng.randint(0, half) for _ in range(n)]
    cycle = []
    if spec.mode == "planted" and n >= 2:
        size = rng.randint(2, min(n, 6))
        verts = rng.sample(range(n), size)
        for i, u in enumerate(verts):
            v = verts[(i + 1) % size]
            cycle.append((u, v, -1 if i == size - 1 else 0))
    rest = max(0, m - len(cycle))
    if spec.negatives is None:
        for _ in range(rest):
            u, v = _endpoints(rng, n)
            arcs.append((u, v, rng.randint(0, half) + pi[u] - pi[v]))
    else:
        if spec.negatives and len(set(pi)) < 2:
            pi[0] = 0
            pi[-1] = half
        for i in range(rest):
            u, v = _endpoints(rng, n)
            if i < spec.negatives:
                while pi[v] <= pi[u]:
                    u, v = _endpoints(rng, n)
                w = rng.randint(0, pi[v] - pi[u] - 1)
            else:
                lo = max(0, pi[v] - pi[u])
                w = rng.randint(lo, lo + half)
            arcs.append((u, v, w + pi[u] - pi[v]))
        rng.shuffle(arcs)
    # splice the cycle in at a seeded position so it is not always last
    pos = rng.randint(0, len(arcs))
    arcs[pos:pos] = cycle
    return build_graph(n, arcs)
