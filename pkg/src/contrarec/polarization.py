"""Hitting times to hub sets and the per-user polarization score.

The score of user u combines expected hitting times of a random walk on the
symmetrized weighted graph to the two hub sets:

    rho_X(u) = |{v : l_X(v) < l_X(u)}| / |V|        (percentile, ties share)
    rho(u)   = rho_X(u) - rho_Y(u)                  in (-1, 1)

Hitting times solve the absorbing-chain system

    l(u) = 0                          u in targets
    l(u) = 1 + sum_w P(u,w) l(w)      otherwise

by Jacobi sweeps, which converge monotonically from below on a connected
graph with a non-empty target set.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .errors import ConvergenceError
from .graph import EndorsementGraph, largest_connected_component


def expected_hitting_times(
    g: EndorsementGraph,
    targets: Iterable[str],
    tol: float = 1e-8,
    max_iter: int = 100_000,
) -> dict[str, float]:
    """Expected steps from every vertex until first arrival in ``targets``.

    The graph must be connected in the undirected sense. Solved to residual
    <= tol in max-norm; raises ConvergenceError (carrying the final residual)
    if the iteration cap is hit first.
    """
    target_set = set(targets)
    if not target_set:
        raise ValueError("targets must be non-empty")
    unknown = target_set - set(g.vertices)
    if unknown:
        raise ValueError(f"target {sorted(unknown)[0]!r} is not a vertex")
    _, excluded = largest_connected_component(g)
    if excluded:
        raise ValueError("graph is not connected; score the largest component")

    n = g.n
    free = [i for i, u in enumerate(g.vertices) if u not in target_set]
    if not free:
        return {u: 0.0 for u in g.vertices}

    adj = g.undirected_matrix()
    deg = np.asarray(adj.sum(axis=1)).ravel()
    trans = adj.multiply(1.0 / deg[:, None]).tocsr()
    q = trans[free][:, free]  # substochastic: walk among non-target vertices

    l = np.zeros(len(free))
    residual = np.inf
    for _ in range(max_iter):
        l_next = 1.0 + q @ l
        delta = np.max(np.abs(l_next - l))
        l = l_next
        if delta < tol:
            residual = np.max(np.abs(l - (1.0 + q @ l)))
            if residual <= tol:
                break
    else:
        residual = np.max(np.abs(l - (1.0 + q @ l)))
        raise ConvergenceError(
            f"hitting-time solve did not reach residual {tol} in {max_iter} "
            f"iterations (residual={residual:.3e})",
            residual=residual,
        )

    times = {u: 0.0 for u in g.vertices}
    for idx, value in zip(free, l):
        times[g.vertices[idx]] = float(value)
    return times


class PolarizationProfile:
    """Per-user hitting times and percentile-based polarization scores."""

    def __init__(
        self,
        l_x: Mapping[str, float],
        l_y: Mapping[str, float],
        rho_x: Mapping[str, float],
        rho_y: Mapping[str, float],
        rho: Mapping[str, float],
    ):
        self.l_x = dict(l_x)
        self.l_y = dict(l_y)
        self.rho_x = dict(rho_x)
        self.rho_y = dict(rho_y)
        self.rho = dict(rho)
        self.users = tuple(sorted(self.rho))
        # Sorted populations back percentile queries for what-if updates.
        self._sorted_x = np.sort(np.array([self.l_x[u] for u in self.users]))
        self._sorted_y = np.sort(np.array([self.l_y[u] for u in self.users]))

    def __contains__(self, user: str) -> bool:
        return user in self.rho

    def percentile_x(self, value: float) -> float:
        return float(np.searchsorted(self._sorted_x, value, side="left")) / len(self.users)

    def percentile_y(self, value: float) -> float:
        return float(np.searchsorted(self._sorted_y, value, side="left")) / len(self.users)


def user_polarization(
    l_x: Mapping[str, float], l_y: Mapping[str, float]
) -> PolarizationProfile:
    """Build the polarization profile from the two hitting-time maps."""
    if set(l_x) != set(l_y):
        raise ValueError("hitting-time maps cover different vertex sets")
    users = sorted(l_x)
    n = len(users)
    xs = np.sort(np.array([l_x[u] for u in users]))
    ys = np.sort(np.array([l_y[u] for u in users]))
    rho_x = {}
    rho_y = {}
    rho = {}
    for u in users:
        rx = float(np.searchsorted(xs, l_x[u], side="left")) / n
        ry = float(np.searchsorted(ys, l_y[u], side="left")) / n
        rho_x[u] = rx
        rho_y[u] = ry
        rho[u] = rx - ry
    return PolarizationProfile(l_x, l_y, rho_x, rho_y, rho)


def updated_hitting_time(
    g: EndorsementGraph, user: str, new_target: str, times: Mapping[str, float]
) -> float:
    """One-row refresh of ``user``'s hitting time after adding edge (user, new_target).

    Only user's transition row changes; every other vertex keeps its solved
    value. A user already absorbing on this side (time 0) stays at 0.
    """
    if user == new_target:
        raise ValueError("new_target must differ from user")
    if times[user] == 0.0:
        return 0.0
    degree = g.weighted_degree(user)
    acc = sum(w * times[v] for v, w in g.neighbors(user).items())
    return 1.0 + (acc + times[new_target]) / (degree + 1.0)


def delta_polarization(
    g: EndorsementGraph,
    user: str,
    new_target: str,
    profile: PolarizationProfile,
) -> float:
    """Potential drop in |rho(user)| if ``user`` endorsed ``new_target`` once.

    First-order estimate: user's hitting times get the one-row update while
    the population of values used for the percentiles stays fixed.
    """
    new_lx = updated_hitting_time(g, user, new_target, profile.l_x)
    new_ly = updated_hitting_time(g, user, new_target, profile.l_y)
    new_rho = profile.percentile_x(new_lx) - profile.percentile_y(new_ly)
    return abs(profile.rho[user]) - abs(new_rho)
