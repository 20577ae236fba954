"""Bucketed empirical acceptance model: p(u endorses i | rho(u), rho(i)).

Counts are collected over deduplicated (user, item) pairs. A user is exposed
to an item when someone they endorse (an out-neighbor) shared it; an exposed
pair also counts as endorsed when the user shared the item themselves. Both
polarity axes are bucketed uniformly over [-1, 1] and the queried ratio is
Laplace-smoothed: (N_e + alpha) / (N_x + 2 alpha).
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .graph import EndorsementGraph, ShareTable
from .items import ItemScore
from .polarization import PolarizationProfile


class AcceptanceModel:
    def __init__(self, endorsed: np.ndarray, exposed: np.ndarray, alpha: float = 1.0):
        endorsed = np.asarray(endorsed, dtype=np.int64)
        exposed = np.asarray(exposed, dtype=np.int64)
        if endorsed.shape != exposed.shape or endorsed.ndim != 2:
            raise ValueError("count matrices must be two equal-shape 2-D arrays")
        if endorsed.shape[0] != endorsed.shape[1]:
            raise ValueError("count matrices must be square")
        if (endorsed < 0).any() or (exposed < 0).any():
            raise ValueError("counts must be non-negative")
        if (endorsed > exposed).any():
            raise ValueError("endorsement counts cannot exceed exposure counts")
        if alpha < 0:
            raise ValueError("alpha must be >= 0")
        self.endorsed = endorsed
        self.exposed = exposed
        self.alpha = float(alpha)

    @property
    def n_buckets(self) -> int:
        return self.endorsed.shape[0]

    @property
    def bucket_width(self) -> float:
        return 2.0 / self.n_buckets

    def bucket(self, rho: float) -> int:
        """Bucket index of a polarity in (-1, 1); boundary values clamp inward."""
        idx = int((rho + 1.0) / self.bucket_width)
        return min(max(idx, 0), self.n_buckets - 1)

    def accept_prob(self, rho_u: float, rho_i: float) -> float:
        bu = self.bucket(rho_u)
        bi = self.bucket(rho_i)
        num = self.endorsed[bu, bi] + self.alpha
        den = self.exposed[bu, bi] + 2.0 * self.alpha
        if den == 0.0:  # only reachable with alpha = 0 on an empty cell
            return 0.5
        return float(num / den)


def accept_prob(model: AcceptanceModel, rho_u: float, rho_i: float) -> float:
    return model.accept_prob(rho_u, rho_i)


def fit_acceptance_model(
    g: EndorsementGraph,
    shares: ShareTable,
    profile: PolarizationProfile,
    item_scores: Mapping[str, ItemScore],
    n_buckets: int = 10,
    alpha: float = 1.0,
) -> AcceptanceModel:
    """Aggregate exposure and endorsement counts over all scored (user, item) pairs."""
    endorsed = np.zeros((n_buckets, n_buckets), dtype=np.int64)
    exposed = np.zeros((n_buckets, n_buckets), dtype=np.int64)
    model = AcceptanceModel(endorsed, exposed, alpha)
    for u in profile.users:
        if u not in g:
            continue
        seen: set[str] = set()
        for v in g.out_neighbors(u):
            seen |= shares.items_of(v)
        if not seen:
            continue
        own = shares.items_of(u)
        bu = model.bucket(profile.rho[u])
        for item in seen:
            score = item_scores.get(item)
            if score is None:
                continue
            bi = model.bucket(score.rho)
            exposed[bu, bi] += 1
            if item in own:
                endorsed[bu, bi] += 1
    return model


def save_model(model: AcceptanceModel, ne_path, nx_path) -> None:
    """Write the count-matrix pair, each with a metadata header line."""
    header = f"# n_buckets={model.n_buckets} alpha={model.alpha!r}\n"
    for path, matrix in ((ne_path, model.endorsed), (nx_path, model.exposed)):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(header)
            for row in matrix:
                fh.write(",".join(str(int(v)) for v in row) + "\n")


def load_model(ne_path, nx_path) -> AcceptanceModel:
    matrices = []
    alpha = 1.0
    for path in (ne_path, nx_path):
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().strip()
            meta = dict(
                part.split("=", 1) for part in header.lstrip("# ").split() if "=" in part
            )
            alpha = float(meta.get("alpha", alpha))
            matrices.append(
                np.array(
                    [[int(v) for v in line.split(",")] for line in fh if line.strip()],
                    dtype=np.int64,
                )
            )
    return AcceptanceModel(matrices[0], matrices[1], alpha)
