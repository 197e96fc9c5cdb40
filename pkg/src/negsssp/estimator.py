"""Estimator-style front end to the solver."""
from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .graph import WeightedDigraph, apply_potentials
from .hops import SourceSpec, dijkstra
from .solver import SolverConfig, solve
from .validation import check_graph, check_random_state, check_vertex


class NegativeWeightSSSP(BaseEstimator):
    """Single-source shortest paths with negative arc lengths.

    ``fit(G)`` runs the randomized solver from ``source``. Afterwards
    ``potentials_`` makes every arc of ``G`` nonnegative, so ``transform``
    returns the reweighted graph and ``predict`` answers further sources
    with one Dijkstra pass each. If ``G`` has a negative cycle, ``cycle_``
    holds it and ``transform``/``predict`` raise.

    Parameters mirror :class:`~negsssp.solver.SolverConfig`;
    ``random_state`` is its seed.
    """

    def __init__(self, source=0, c0=3, c_r=4, c_s=4, smallness=0.125, retry_cap=8,
                 k_min=None, regime="auto", random_state=0, lazy_betweenness=True,
                 full_multiscale=False):
        self.source = source
        self.c0 = c0
        self.c_r = c_r
        self.c_s = c_s
        self.smallness = smallness
        self.retry_cap = retry_cap
        self.k_min = k_min
        self.regime = regime
        self.random_state = random_state
        self.lazy_betweenness = lazy_betweenness
        self.full_multiscale = full_multiscale

    def _config(self):
        seed = self.random_state
        if seed is not None and not isinstance(seed, int):
            seed = check_random_state(seed).randrange(2 ** 32)
        return SolverConfig(c0=self.c0, c_r=self.c_r, c_s=self.c_s, smallness=self.smallness,
                            retry_cap=self.retry_cap, k_min=self.k_min, regime=self.regime,
                            seed=seed, lazy_betweenness=self.lazy_betweenness,
                            full_multiscale=self.full_multiscale)

    def fit(self, G, y=None):
        G = check_graph(G)
        s = check_vertex(G, self.source, "source")
        res = solve(G, s, self._config())
        self.graph_ = G
        self.result_ = res
        self.dist_ = res.dist
        self.parent_ = res.parent
        self.potentials_ = res.potentials
        self.cycle_ = res.cycle
        self.has_negative_cycle_ = res.has_negative_cycle
        self.reports_ = res.reports
        self.counters_ = res.counters
        return self

    def _check_fitted(self):
        if not hasattr(self, "result_"):
            raise NotFittedError("call fit first")
        if self.has_negative_cycle_:
            raise ValueError("the fitted graph has a negative cycle")

    def transform(self, G=None) -> WeightedDigraph:
        """The fitted graph reweighted by ``potentials_`` (all lengths >= 0)."""
        self._check_fitted()
        if G is not None and check_graph(G) != self.graph_:
            raise ValueError("transform only applies to the fitted graph")
        Gphi = apply_potentials(self.graph_, self.potentials_)
        return WeightedDigraph(Gphi.n, Gphi.tails, Gphi.heads, Gphi.lengths)

    def predict(self, sources=None):
        """Distance lists (``None`` = unreachable), one per source vertex."""
        self._check_fitted()
        G = self.graph_
        if sources is None:
            sources = [self.source]
        Gphi = self.transform()
        phi = self.potentials_
        out = []
        for s in sources:
            s = check_vertex(G, s, "source")
            dist, _ = dijkstra(Gphi, SourceSpec.single(s))
            out.append([None if d is None else d - phi[s] + phi[v]
                        for v, d in enumerate(dist)])
        return out

    def fit_predict(self, G, y=None):
        return self.fit(G).predict()
