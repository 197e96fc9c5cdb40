"""Small named graphs and hypothesis strategies shared by the tests."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from negsssp.generate import InstanceSpec, generate
from negsssp.graph import build_graph

# GA: s -> a -> t
S, A, T = 0, 1, 2
GA_ARCS = [(0, 1, -2), (1, 2, 3)]
# GB: a <-> b, total -1
GB_ARCS = [(0, 1, -1), (1, 0, 0)]
# GC: s -> a -> b -> c -> t
GC_S, GC_A, GC_B, GC_C, GC_T = range(5)
GC_ARCS = [(0, 1, -1), (1, 2, 1), (2, 3, -1), (3, 4, 0)]
# GE: s -> a -> u -> b
GE_S, GE_A, GE_U, GE_B = range(4)
GE_ARCS = [(0, 1, -2), (1, 2, 1), (2, 3, -2)]


def GA():
    return build_graph(3, GA_ARCS)


def GB():
    return build_graph(2, GB_ARCS)


def GC():
    return build_graph(5, GC_ARCS)


def GE():
    return build_graph(4, GE_ARCS)


def random_graph(seed, n, m, neg=0.25, lo=-8, hi=16):
    rng = random.Random(seed)
    arcs = []
    for _ in range(m):
        u, v = rng.randrange(n), rng.randrange(n)
        w = rng.randint(lo, -1) if rng.random() < neg else rng.randint(0, hi)
        arcs.append((u, v, w))
    return build_graph(n, arcs)


def shifted(seed, n, m, W=16):
    return generate(InstanceSpec("shifted", n, m, W=W, seed=seed))


@st.composite
def graphs(draw, max_n=8, max_m=20, lo=-6, hi=10, neg=None):
    """Arbitrary small multigraphs (cycles allowed)."""
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    vert = st.integers(0, n - 1)
    arcs = draw(st.lists(st.tuples(vert, vert, st.integers(lo, hi)), min_size=m, max_size=m))
    return build_graph(n, arcs)


@st.composite
def cycle_free_graphs(draw, max_n=8, max_m=20, W=12):
    """``w + pi(u) - pi(v)`` with ``w >= 0``: negative arcs but no negative cycle."""
    n = draw(st.integers(1, max_n))
    pi = draw(st.lists(st.integers(0, W), min_size=n, max_size=n))
    m = draw(st.integers(0, max_m))
    vert = st.integers(0, n - 1)
    raw = draw(st.lists(st.tuples(vert, vert, st.integers(0, W)), min_size=m, max_size=m))
    return build_graph(n, [(u, v, w + pi[u] - pi[v]) for u, v, w in raw])


def reducer_sandwich_failures(H, GU, kappa_max, per_hop, vertices=None):
    """Pairs ``(s, t, kappa)`` breaking ``d(s,t) <= d^{ceil(kappa/per_hop)}_H <= d^kappa(s,t)``.

    ``H`` distances are read off the reweighted reducer and shifted back by
    its potentials; ``d`` is the unrestricted distance in ``GU``.
    """
    from negsssp.hops import SourceSpec, hop_distances

    R, phi = H.reweighted, H.potentials
    V = range(GU.n) if vertices is None else sorted(vertices)
    bad = []
    for s in V:
        g = hop_distances(GU, SourceSpec.single(s), max(kappa_max, GU.k + 1),
                          keep_rounds=True)
        true = g.dist
        bs = H.base(s)
        top = -(-kappa_max // per_hop)
        hr = hop_distances(R, SourceSpec.single(bs), top, keep_rounds=True)
        for t in V:
            bt = H.base(t)
            for kappa in range(kappa_max + 1):
                r = -(-kappa // per_hop)
                dh = hr.value(bt, r)
                if dh is not None:
                    dh = dh - phi[bs] + phi[bt]
                dk = g.value(t, kappa)
                lower_ok = dh is None or (true[t] is not None and true[t] <= dh)
                upper_ok = dk is None or (dh is not None and dh <= dk)
                if not (lower_ok and upper_ok):
                    bad.append((s, t, kappa))
    return bad


def remote_instance(seed, max_n=40, max_u=6):
    """A preprocessed cycle-free graph remotized around a pair of U = N.

    Returns ``(GU, U)`` with ``|U| <= max_u`` and ``GU.n <= max_n``.
    """
    from negsssp.betweenness import base_hops, sandwich_set
    from negsssp.graph import apply_potentials, preprocess, restrict_negatives
    from negsssp.reducer import remotize

    rng = random.Random(seed)
    while True:
        k = rng.randint(2, max_u)
        n0 = rng.randint(2, max(2, max_n - 2 * k - 2))
        m = rng.randint(max(n0, k), 3 * n0 + k)
        G = generate(InstanceSpec("shifted", n0, m, W=12, seed=rng.randrange(10 ** 6),
                                  negatives=k))
        G, _ = preprocess(G)
        if G.n <= max_n:
            break
    U = sorted(G.negative_vertices)
    s, t = rng.choice(U), rng.choice(U)
    cert = sandwich_set(G, s, t, base_hops(G.n))
    G2 = apply_potentials(G, remotize(G, cert))
    return restrict_negatives(G2, U), frozenset(U)
