"""Factor lists, weighted footrule rank aggregation, and explained recommendations.

Five per-user factor lists are aggregated into one top-k list delta by
minimizing

    phi(delta) = sum_i w_i d(delta, L_i)

where d is the Spearman footrule distance extended to top-k lists (an
element absent from a list sits at position k+1). Small candidate unions are
solved exactly by enumeration; larger ones by a seeded cross-entropy Monte
Carlo search over a position-probability matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .acceptance import AcceptanceModel
from .errors import EmptyPoolError
from .graph import SIDE_X, SIDE_Y, EndorsementGraph, HubSet, ShareTable
from .items import ItemScore
from .polarization import PolarizationProfile, delta_polarization
from .topics import TopicVector, diversity_ranking

FACTOR_LABELS = ("L1", "L2", "L3", "L4", "L5")

WEIGHT_PRESETS = {
    "uniform": (0.2, 0.2, 0.2, 0.2, 0.2),
    "contrarian": (0.4, 0.4, 0.2, 0.0, 0.0),
    "agreeable": (0.1, 0.1, 0.6, 0.1, 0.1),
}


@dataclass(frozen=True)
class RankedList:
    label: str
    items: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.items)) != len(self.items):
            raise ValueError(f"list {self.label} contains duplicates")

    def top(self, k: int) -> tuple[str, ...]:
        return self.items[:k]


@dataclass(frozen=True)
class FactorWeights:
    """Importance weights w1..w5, stored normalized to sum 1."""

    values: tuple[float, float, float, float, float]

    @classmethod
    def of(cls, raw: Iterable[float]) -> "FactorWeights":
        values = tuple(float(w) for w in raw)
        if len(values) != 5:
            raise ValueError("exactly five weights required")
        if any(w < 0 for w in values):
            raise ValueError("weights must be non-negative")
        total = sum(values)
        if total == 0:
            raise ValueError("weights must not all be zero")
        return cls(tuple(w / total for w in values))

    @classmethod
    def preset(cls, name: str) -> "FactorWeights":
        if name not in WEIGHT_PRESETS:
            raise ValueError(f"unknown preset {name!r}")
        return cls.of(WEIGHT_PRESETS[name])


@dataclass(frozen=True)
class FactorBreakdown:
    """How one factor list contributed to a recommended item."""

    weight: float
    position: int | None  # 1-based rank in the full factor list, None if absent
    contribution: float  # weight * |pos_delta - pos_list| under the k+1 convention


@dataclass(frozen=True)
class RecommendedItem:
    item: str
    rank: int
    rho: float
    sharers: tuple[str, ...]
    breakdown: dict[str, FactorBreakdown] = field(hash=False)


@dataclass(frozen=True)
class Recommendation:
    user: str
    items: tuple[RecommendedItem, ...]
    phi: float
    weights: FactorWeights
    short_pool: bool


@dataclass(frozen=True)
class CESettings:
    """Cross-entropy search knobs; defaults match the documented contract."""

    samples: int = 2000
    elite_fraction: float = 0.1
    patience: int = 5
    max_rounds: int = 100
    blend: float = 0.5


def build_candidate_pool(
    user: str,
    shares: ShareTable,
    item_scores: Mapping[str, ItemScore],
) -> tuple[str, ...]:
    """All scored items the user has not already shared, sorted by item id."""
    pool = sorted(set(item_scores) - shares.items_of(user))
    if not pool:
        raise EmptyPoolError(f"nothing to recommend for {user!r}")
    return tuple(pool)


def footrule_distance(delta: Sequence[str], ranked: RankedList, k: int) -> int:
    """Spearman footrule between a length-k list and the top-k of ``ranked``.

    Positions are 1-based; an element missing from either list sits at k+1.
    """
    if len(delta) != k:
        raise ValueError(f"delta must have length k={k}, got {len(delta)}")
    pos_delta = {e: i + 1 for i, e in enumerate(delta)}
    pos_list = {e: i + 1 for i, e in enumerate(ranked.top(k))}
    distance = 0
    for e in pos_delta.keys() | pos_list.keys():
        distance += abs(pos_delta.get(e, k + 1) - pos_list.get(e, k + 1))
    return distance


def _phi(delta, lists, weights, k):
    return sum(
        w * footrule_distance(delta, lst, k) for w, lst in zip(weights.values, lists)
    )


def _exact_aggregate(candidates, lists, weights, k):
    best = None
    best_phi = np.inf
    for perm in itertools.permutations(candidates, k):
        phi = _phi(perm, lists, weights, k)
        if phi < best_phi:
            best_phi = phi
            best = perm
    return best, float(best_phi)


def _position_table(lists, candidates, k):
    """Per-list candidate positions under the k+1 convention, vectorized."""
    index = {c: i for i, c in enumerate(candidates)}
    table = np.full((len(lists), len(candidates)), k + 1, dtype=np.float64)
    for li, lst in enumerate(lists):
        for pos, item in enumerate(lst.top(k), start=1):
            table[li, index[item]] = pos
    return table


def _ce_aggregate(candidates, lists, weights, k, seed, settings: CESettings):
    rng = np.random.default_rng(seed)
    n_c = len(candidates)
    n_samples = settings.samples
    n_elite = max(1, int(n_samples * settings.elite_fraction))
    pos_table = _position_table(lists, candidates, k)  # (5, n_c)
    w = np.array(weights.values)

    prob = np.full((n_c, k), 1.0 / n_c)
    best_phi = np.inf
    best = None
    stall = 0
    rows = np.arange(n_samples)[:, None]
    ranks = np.arange(1, k + 1, dtype=np.float64)

    for _ in range(settings.max_rounds):
        avail = np.ones((n_samples, n_c), dtype=bool)
        samples = np.empty((n_samples, k), dtype=np.int64)
        for j in range(k):
            p = np.where(avail, prob[:, j][None, :], 0.0)
            totals = p.sum(axis=1, keepdims=True)
            fallback = totals[:, 0] <= 0.0
            if fallback.any():
                uniform = avail[fallback] / avail[fallback].sum(axis=1, keepdims=True)
                p[fallback] = uniform
                totals = p.sum(axis=1, keepdims=True)
            cum = np.cumsum(p / totals, axis=1)
            draws = rng.random((n_samples, 1))
            idx = np.minimum((draws > cum).sum(axis=1), n_c - 1)
            # Guard against a draw landing on a zero-probability slot.
            bad = ~avail[rows[:, 0], idx]
            if bad.any():
                idx[bad] = np.argmax(avail[bad], axis=1)
            samples[:, j] = idx
            avail[rows[:, 0], idx] = False

        pos_delta = np.full((n_samples, n_c), k + 1, dtype=np.float64)
        pos_delta[rows, samples] = ranks
        # Elements absent from both delta and a list share position k+1 and
        # contribute nothing, so summing over all candidates is exact.
        phi = np.zeros(n_samples)
        for li in range(len(lists)):
            phi += w[li] * np.abs(pos_delta - pos_table[li][None, :]).sum(axis=1)

        order = np.argsort(phi, kind="stable")
        elite = samples[order[:n_elite]]
        round_best = float(phi[order[0]])
        if round_best < best_phi:
            best_phi = round_best
            best = tuple(candidates[i] for i in samples[order[0]])
            stall = 0
        else:
            stall += 1
            if stall >= settings.patience:
                break

        freq = np.zeros((n_c, k))
        for j in range(k):
            counts = np.bincount(elite[:, j], minlength=n_c)
            freq[:, j] = counts / n_elite
        prob = (1.0 - settings.blend) * prob + settings.blend * freq

    return best, best_phi


def aggregate_rankings(
    lists: Sequence[RankedList],
    weights: FactorWeights,
    k: int,
    seed: int = 0,
    exact_union_limit: int = 8,
    method: str = "auto",
    ce_settings: CESettings = CESettings(),
) -> tuple[tuple[str, ...], float]:
    """Length-k list minimizing the weighted footrule objective.

    ``method`` is "auto" (exact when the union of top-k's has at most
    ``exact_union_limit`` elements, cross-entropy otherwise), "exact", or "ce".
    """
    if len(lists) != len(weights.values):
        raise ValueError("one weight per list required")
    candidates = sorted(set().union(*(lst.top(k) for lst in lists)))
    if not candidates:
        raise ValueError("all factor lists are empty")
    if k < 1 or k > len(candidates):
        raise ValueError(f"k={k} out of range for {len(candidates)} candidates")
    if method not in ("auto", "exact", "ce"):
        raise ValueError(f"unknown method {method!r}")
    if method == "exact" or (method == "auto" and len(candidates) <= exact_union_limit):
        return _exact_aggregate(candidates, lists, weights, k)
    return _ce_aggregate(candidates, lists, weights, k, seed, ce_settings)


def build_factor_lists(
    g: EndorsementGraph,
    user: str,
    pool: Sequence[str],
    sides: Mapping[str, str],
    hubs_x: HubSet,
    hubs_y: HubSet,
    profile: PolarizationProfile,
    item_scores: Mapping[str, ItemScore],
    model: AcceptanceModel,
    user_topics: Mapping[str, TopicVector],
    item_topics: Mapping[str, TopicVector],
    shares: ShareTable,
) -> dict[str, RankedList]:
    """The five per-user factor lists over the candidate pool.

    L1: items shared by opposite-side hubs, by descending potential drop in
        |rho(user)| when endorsing the item's highest-degree hub sharer.
    L2: descending exclusivity to the opposite side.
    L3: descending acceptance probability.
    L4: ascending topic similarity (most diverse first).
    L5: descending popularity. All ties break by ascending item id.
    """
    side = sides[user]
    opp_hubs = hubs_y if side == SIDE_X else hubs_x
    opp_label = SIDE_Y if side == SIDE_X else SIDE_X

    l1_entries = []
    for item in pool:
        hub_sharers = [h for h in opp_hubs.members if h in item_scores[item].sharers]
        if not hub_sharers or hub_sharers[0] == user:
            continue
        gain = delta_polarization(g, user, hub_sharers[0], profile)
        l1_entries.append((-gain, item))
    l1_entries.sort()
    l1 = RankedList("L1", tuple(item for _, item in l1_entries))

    def excl(item):
        score = item_scores[item]
        return score.exclusivity_y if opp_label == SIDE_Y else score.exclusivity_x

    l2 = RankedList(
        "L2", tuple(sorted(pool, key=lambda item: (-excl(item), item)))
    )

    rho_u = profile.rho[user]
    l3 = RankedList(
        "L3",
        tuple(
            sorted(
                pool,
                key=lambda item: (-model.accept_prob(rho_u, item_scores[item].rho), item),
            )
        ),
    )

    user_vec = user_topics.get(user, {})
    ranked = diversity_ranking(
        user_vec, [(item, item_topics.get(item, {})) for item in pool]
    )
    l4 = RankedList("L4", tuple(item for item, _ in ranked))

    l5 = RankedList(
        "L5",
        tuple(sorted(pool, key=lambda item: (-item_scores[item].popularity, item))),
    )
    return {"L1": l1, "L2": l2, "L3": l3, "L4": l4, "L5": l5}


def assemble_recommendation(
    user: str,
    lists: Mapping[str, RankedList],
    pool: Sequence[str],
    weights: FactorWeights,
    item_scores: Mapping[str, ItemScore],
    graph_vertices: Iterable[str],
    n: int = 3,
    seed: int = 0,
    method: str = "auto",
) -> Recommendation:
    """Aggregate cached factor lists into an explained top-n recommendation."""
    if not pool:
        raise EmptyPoolError(f"nothing to recommend for {user!r}")
    k = min(n, len(pool))
    ordered = [lists[label] for label in FACTOR_LABELS]
    delta, phi = aggregate_rankings(ordered, weights, k, seed=seed, method=method)

    vertex_set = set(graph_vertices)
    items = []
    for rank, item in enumerate(delta, start=1):
        breakdown = {}
        pos_delta = rank
        for label, weight in zip(FACTOR_LABELS, weights.values):
            lst = lists[label]
            top_positions = {e: i + 1 for i, e in enumerate(lst.top(k))}
            full_position = (
                lst.items.index(item) + 1 if item in lst.items else None
            )
            contribution = weight * abs(pos_delta - top_positions.get(item, k + 1))
            breakdown[label] = FactorBreakdown(
                weight=weight, position=full_position, contribution=contribution
            )
        sharers = tuple(sorted(item_scores[item].sharers & vertex_set))
        items.append(
            RecommendedItem(
                item=item,
                rank=rank,
                rho=item_scores[item].rho,
                sharers=sharers,
                breakdown=breakdown,
            )
        )
    return Recommendation(
        user=user,
        items=tuple(items),
        phi=phi,
        weights=weights,
        short_pool=len(pool) < n,
    )


def recommend(
    g: EndorsementGraph,
    user: str,
    sides: Mapping[str, str],
    hubs_x: HubSet,
    hubs_y: HubSet,
    profile: PolarizationProfile,
    item_scores: Mapping[str, ItemScore],
    model: AcceptanceModel,
    user_topics: Mapping[str, TopicVector],
    item_topics: Mapping[str, TopicVector],
    shares: ShareTable,
    weights: FactorWeights,
    n: int = 3,
    seed: int = 0,
) -> Recommendation:
    """End-to-end recommendation for one user from the fitted artifacts."""
    pool = build_candidate_pool(user, shares, item_scores)
    lists = build_factor_lists(
        g, user, pool, sides, hubs_x, hubs_y, profile, item_scores, model,
        user_topics, item_topics, shares,
    )
    return assemble_recommendation(
        user, lists, pool, weights, item_scores, g.vertices, n=n, seed=seed
    )


def random_baseline(
    pool: Iterable[str],
    exclude: Iterable[str],
    n: int = 3,
    seed: int = 0,
) -> list[str]:
    """Uniform sample (without replacement) from the pool minus excluded items."""
    residual = sorted(set(pool) - set(exclude))
    if not residual:
        raise EmptyPoolError("no items left for the random baseline")
    rng = np.random.default_rng(seed)
    take = min(n, len(residual))
    picks = rng.choice(len(residual), size=take, replace=False)
    return [residual[int(i)] for i in picks]
