"""Deterministic force-directed 2-D layout for the explorer.

Fruchterman-Reingold-style spring embedder: repulsion k^2/d between all
vertex pairs, attraction d^2/k along edges (scaled by edge weight), and a
multiplicative cooling schedule (factor 0.95). Initial placement is keyed by
a hash of (seed, user id), so the result does not depend on input order.
Coordinates are normalized to the unit square.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .graph import EndorsementGraph

COOLING = 0.95


def _initial_positions(vertices, seed: int) -> np.ndarray:
    pos = np.empty((len(vertices), 2))
    for i, user in enumerate(vertices):
        digest = hashlib.sha256(f"{seed}:{user}".encode("utf-8")).digest()
        pos[i, 0] = int.from_bytes(digest[:8], "big") / 2**64
        pos[i, 1] = int.from_bytes(digest[8:16], "big") / 2**64
    return pos


def compute_layout(
    g: EndorsementGraph, seed: int = 0, iterations: int = 500
) -> dict[str, tuple[float, float]]:
    """Per-user (x, y) in [0, 1]^2, deterministic for (graph, seed, iterations)."""
    n = g.n
    if n == 0:
        return {}
    if n == 1:
        return {g.vertices[0]: (0.5, 0.5)}

    pos = _initial_positions(g.vertices, seed)
    k = np.sqrt(1.0 / n)

    edge_pairs = sorted(
        {(min(g.index(s), g.index(t)), max(g.index(s), g.index(t))) for s, t in g.edges}
    )
    src = np.array([p[0] for p in edge_pairs], dtype=np.int64)
    dst = np.array([p[1] for p in edge_pairs], dtype=np.int64)
    und = g.undirected_matrix()
    weight = np.array([und[i, j] for i, j in edge_pairs], dtype=np.float64)
    if weight.size:
        weight = weight / weight.max()

    temperature = 0.1
    for _ in range(iterations):
        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=2))
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-9)
        repulse = (k * k) / dist**2  # k^2/d along the unit vector diff/d
        np.fill_diagonal(repulse, 0.0)
        disp = (diff * repulse[:, :, None]).sum(axis=1)

        if src.size:
            delta = pos[src] - pos[dst]
            d = np.maximum(np.sqrt((delta**2).sum(axis=1)), 1e-9)
            pull = (d / k) * weight  # attraction d^2/k along the unit vector
            vec = delta * pull[:, None]
            np.add.at(disp, src, -vec)
            np.add.at(disp, dst, vec)

        length = np.maximum(np.sqrt((disp**2).sum(axis=1)), 1e-12)
        step = np.minimum(length, temperature)
        pos += disp / length[:, None] * step[:, None]
        temperature *= COOLING

    lo = pos.min(axis=0)
    span = pos.max(axis=0) - lo
    span[span == 0.0] = 1.0
    pos = (pos - lo) / span
    return {u: (float(pos[i, 0]), float(pos[i, 1])) for i, u in enumerate(g.vertices)}
