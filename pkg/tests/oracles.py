"""Independent oracles used by the test suite.

Each oracle recomputes an expected value through a route disjoint from the
implementation it checks: dense linear algebra instead of iterative sweeps,
simulation instead of solving, exhaustive enumeration instead of stochastic
search.
"""

from __future__ import annotations

import itertools

import numpy as np
from numba import njit, prange

from contrarec.graph import EndorsementGraph


def transition_matrix(g: EndorsementGraph) -> np.ndarray:
    """Dense row-stochastic transition matrix of the symmetrized walk."""
    n = g.n
    a = np.zeros((n, n))
    for u in g.vertices:
        i = g.index(u)
        for v, w in g.neighbors(u).items():
            a[i, g.index(v)] = w
    deg = a.sum(axis=1)
    deg[deg == 0] = 1.0
    return a / deg[:, None]


def dense_hitting_times(g: EndorsementGraph, targets) -> dict[str, float]:
    """Exact absorbing-chain solve with a dense LU factorization."""
    p = transition_matrix(g)
    target_idx = {g.index(t) for t in targets}
    free = [i for i in range(g.n) if i not in target_idx]
    if not free:
        return {u: 0.0 for u in g.vertices}
    q = p[np.ix_(free, free)]
    sol = np.linalg.solve(np.eye(len(free)) - q, np.ones(len(free)))
    times = {u: 0.0 for u in g.vertices}
    for idx, value in zip(free, sol):
        times[g.vertices[idx]] = float(value)
    return times


@njit(parallel=True, cache=True)
def _simulate_walks(cum, is_target, walks_per_start, cap, seed):
    n = cum.shape[0]
    sums = np.zeros(n)
    sumsq = np.zeros(n)
    for s in prange(n):
        np.random.seed(seed + 7919 * s)
        acc = 0.0
        accsq = 0.0
        for _ in range(walks_per_start):
            pos = np.int64(s)
            steps = np.int64(0)
            while not is_target[pos] and steps < cap:
                r = np.random.random()
                pos = np.int64(np.searchsorted(cum[pos], r))
                steps += 1
            acc += steps
            accsq += steps * steps
        sums[s] = acc
        sumsq[s] = accsq
    return sums, sumsq


def mc_hitting_times(
    g: EndorsementGraph,
    targets,
    total_walks: int = 1_000_000,
    cap: int = 1_000_000,
    seed: int = 0,
):
    """Per-vertex Monte-Carlo mean and standard error from truncated walks.

    ``total_walks`` is split evenly across start vertices.
    """
    p = transition_matrix(g)
    cum = np.cumsum(p, axis=1)
    is_target = np.zeros(g.n, dtype=np.bool_)
    for t in targets:
        is_target[g.index(t)] = True
    walks_per_start = max(1, total_walks // g.n)
    sums, sumsq = _simulate_walks(cum, is_target, walks_per_start, cap, seed)
    means = sums / walks_per_start
    variances = np.maximum(sumsq / walks_per_start - means**2, 0.0)
    stderr = np.sqrt(variances / walks_per_start)
    return (
        {u: float(means[g.index(u)]) for u in g.vertices},
        {u: float(stderr[g.index(u)]) for u in g.vertices},
        walks_per_start,
    )


def warm_up_simulator() -> None:
    """Trigger numba compilation outside any timed section."""
    g = EndorsementGraph({("a", "b"): 1, ("b", "c"): 1})
    mc_hitting_times(g, ["a"], total_walks=30, cap=1000, seed=0)


def fiedler_partition(g: EndorsementGraph) -> tuple[frozenset, frozenset]:
    """Sign split of the Fiedler vector via a full dense eigendecomposition."""
    n = g.n
    a = np.zeros((n, n))
    for u in g.vertices:
        i = g.index(u)
        for v, w in g.neighbors(u).items():
            a[i, g.index(v)] = w
    deg = a.sum(axis=1)
    inv_sqrt = 1.0 / np.sqrt(np.where(deg == 0, 1.0, deg))
    lap = np.eye(n) - inv_sqrt[:, None] * a * inv_sqrt[None, :]
    eigvals, eigvecs = np.linalg.eigh(lap)
    fiedler = eigvecs[:, np.argsort(eigvals)[1]]
    pos = frozenset(u for u, x in zip(g.vertices, fiedler) if x > 0)
    rest = frozenset(g.vertices) - pos
    return pos, rest


def brute_force_aggregate(lists, weights, k):
    """Exhaustive minimizer of the weighted footrule objective.

    Scans ordered k-subsets of the union of top-k's in lexicographic order;
    ties keep the first (lexicographically smallest) optimum.
    """
    candidates = sorted(set().union(*(tuple(lst)[:k] for lst in lists)))
    best, best_phi = None, float("inf")
    for perm in itertools.permutations(candidates, k):
        phi = sum(
            w * _footrule(perm, tuple(lst)[:k], k) for w, lst in zip(weights, lists)
        )
        if phi < best_phi:
            best, best_phi = perm, phi
    return best, best_phi


def _footrule(delta, top, k):
    pos_d = {e: i + 1 for i, e in enumerate(delta)}
    pos_l = {e: i + 1 for i, e in enumerate(top)}
    return sum(
        abs(pos_d.get(e, k + 1) - pos_l.get(e, k + 1)) for e in pos_d.keys() | pos_l.keys()
    )


def random_connected_graph(n: int, p: float, seed: int) -> EndorsementGraph:
    """Seeded G(n, p) conditioned on (undirected) connectivity."""
    attempt = 0
    while True:
        rng = np.random.default_rng(seed * 1000 + attempt)
        width = len(str(n - 1))
        ids = [f"v{i:0{width}d}" for i in range(n)]
        upper = np.triu(rng.random((n, n)) < p, k=1)
        edges = {}
        for i, j in zip(*np.nonzero(upper)):
            if rng.random() < 0.5:
                edges[(ids[i], ids[j])] = 1 + int(rng.integers(0, 3))
            else:
                edges[(ids[j], ids[i])] = 1 + int(rng.integers(0, 3))
        if edges:
            g = EndorsementGraph(edges, vertices=ids)
            from contrarec.graph import largest_connected_component

            component, excluded = largest_connected_component(g)
            if not excluded:
                return g
        attempt += 1
