"""Input checks shared by the estimator and the command line."""
from __future__ import annotations

import numbers
import random

from .exceptions import GraphError
from .graph import WeightedDigraph, build_graph


def check_graph(G) -> WeightedDigraph:
    """Accept a :class:`WeightedDigraph` or ``(n, arcs)`` and return a graph."""
    if isinstance(G, WeightedDigraph):
        return G
    if isinstance(G, tuple) and len(G) == 2:
        n, arcs = G
        if not isinstance(n, numbers.Integral) or isinstance(n, bool):
            raise GraphError("vertex count must be an integer")
        return build_graph(int(n), arcs)
    raise GraphError(f"expected a WeightedDigraph or (n, arcs), got {type(G).__name__}")


def check_vertex(G: WeightedDigraph, v, name="vertex") -> int:
    if isinstance(v, bool) or not isinstance(v, numbers.Integral):
        raise GraphError(f"{name} must be an integer, got {v!r}")
    if not 0 <= v < G.n:
        raise GraphError(f"{name} {v} out of range [0, {G.n})")
    return int(v)


def check_random_state(seed) -> random.Random:
    """``None``, an int or a ``random.Random`` to a ``random.Random``."""
    if isinstance(seed, random.Random):
        return seed
    if seed is None:
        return random.Random()
    if isinstance(seed, numbers.Integral) and not isinstance(seed, bool):
        return random.Random(int(seed))
    raise ValueError(f"cannot seed a random.Random from {seed!r}")
