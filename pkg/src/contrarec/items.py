"""Per-item polarity, side exclusivity, and popularity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph import SIDE_X, ShareTable
from .polarization import PolarizationProfile


@dataclass(frozen=True)
class ItemScore:
    item: str
    rho: float
    sharers: frozenset[str]
    n_x: int
    n_y: int
    exclusivity_x: float
    exclusivity_y: float
    popularity: int


def item_polarization(
    sharers: Iterable[str], profile: PolarizationProfile
) -> float | None:
    """Mean polarization of the scored sharers; None when no sharer is scored."""
    values = [profile.rho[u] for u in sharers if u in profile]
    if not values:
        return None
    return sum(values) / len(values)


def exclusivity_scores(n_x: int, n_y: int) -> tuple[float, float]:
    """Smoothed share ratios ((n_x+1)/(n_y+1), (n_y+1)/(n_x+1)).

    Add-one smoothing keeps one-sided items (the interesting ones) finite.
    """
    if n_x + n_y < 1:
        raise ValueError("item needs at least one scored sharer")
    return (n_x + 1) / (n_y + 1), (n_y + 1) / (n_x + 1)


def popularity_score(item: str, shares: ShareTable) -> int:
    """Maximum retweet count over the item's share records."""
    records = shares.records_for_item(item)
    if not records:
        raise KeyError(f"unknown item {item!r}")
    return max(r.retweet_count for r in records)


def score_items(
    shares: ShareTable,
    profile: PolarizationProfile,
    sides: Mapping[str, str],
) -> tuple[dict[str, ItemScore], tuple[str, ...]]:
    """Score every item in the share table.

    Items whose sharers are all unscored have no defined polarity; they are
    returned in the second element instead of the score table.
    """
    scores: dict[str, ItemScore] = {}
    excluded: list[str] = []
    for item in shares.items():
        sharers = shares.sharers(item)
        scored = [u for u in sharers if u in profile]
        if not scored:
            excluded.append(item)
            continue
        rho = sum(profile.rho[u] for u in scored) / len(scored)
        n_x = sum(1 for u in scored if sides[u] == SIDE_X)
        n_y = len(scored) - n_x
        excl_x, excl_y = exclusivity_scores(n_x, n_y)
        scores[item] = ItemScore(
            item=item,
            rho=rho,
            sharers=sharers,
            n_x=n_x,
            n_y=n_y,
            exclusivity_x=excl_x,
            exclusivity_y=excl_y,
            popularity=popularity_score(item, shares),
        )
    return scores, tuple(excluded)
