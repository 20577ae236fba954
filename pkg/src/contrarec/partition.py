"""Two-sided graph partitioning via spectral bisection.

The split is the sign pattern of the Fiedler vector of the symmetric
normalized Laplacian L = I - D^{-1/2} A D^{-1/2} of the undirected weighted
graph, computed by deflated power iteration. Zero entries go to side X, and
the side containing the lexicographically smallest vertex is labeled X, so
the returned assignment is a canonical representation of the bipartition.
"""

from __future__ import annotations

import csv
from typing import Mapping

import numpy as np

from .errors import DataFormatError
from .graph import SIDE_X, SIDE_Y, SIDES, EndorsementGraph


def _fiedler_vector(g: EndorsementGraph, seed: int, tol: float, max_iter: int):
    adj = g.undirected_matrix()
    deg = np.asarray(adj.sum(axis=1)).ravel()
    deg[deg == 0.0] = 1.0  # isolated vertices cannot occur on a connected input
    inv_sqrt = 1.0 / np.sqrt(deg)
    v0 = np.sqrt(deg)
    v0 /= np.linalg.norm(v0)

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(g.n)
    x -= (v0 @ x) * v0
    nx = np.linalg.norm(x)
    if nx == 0.0:  # astronomically unlikely; reseed deterministically
        x = rng.standard_normal(g.n)
        x -= (v0 @ x) * v0
        nx = np.linalg.norm(x)
    x /= nx

    # Power iteration on B = 2I - L = I + D^{-1/2} A D^{-1/2}, eigenvalues in
    # [0, 2]; deflating v0 (eigenvalue 2) leaves the Fiedler direction dominant.
    for _ in range(max_iter):
        y = x + inv_sqrt * (adj @ (inv_sqrt * x))
        y -= (v0 @ y) * v0
        ny = np.linalg.norm(y)
        if ny < 1e-12:
            # B annihilates the deflated space (two-vertex graph): the
            # current iterate is already the eigenvector.
            break
        y /= ny
        if y @ x < 0.0:
            y = -y
        delta = np.max(np.abs(y - x))
        x = y
        if delta < tol:
            break
    return x


def partition(
    g: EndorsementGraph, seed: int = 0, tol: float = 1e-8, max_iter: int = 10_000
) -> dict[str, str]:
    """Split a connected graph into the two sides of the controversy.

    Deterministic for a given (graph, seed). Raises on graphs with fewer
    than two vertices.
    """
    if g.n < 2:
        raise ValueError("graph too small to partition (need >= 2 vertices)")
    vec = _fiedler_vector(g, seed, tol, max_iter)
    positive = {u for u, v in zip(g.vertices, vec) if v > 0.0}
    negative = {u for u, v in zip(g.vertices, vec) if v < 0.0}
    if not positive or not negative:
        raise RuntimeError("spectral bisection produced a one-sided split")
    smallest = g.vertices[0]
    # Zero entries join side X; X is the side holding the smallest vertex.
    if smallest in negative:
        x_side, y_side = negative, positive
    else:
        x_side, y_side = positive, negative
    assignment = {}
    for u in g.vertices:
        assignment[u] = SIDE_X if (u in x_side or u not in y_side) else SIDE_Y
    return assignment


def load_assignment(path, g: EndorsementGraph) -> dict[str, str]:
    """Read a ``user,side`` CSV and validate it covers every scored vertex."""
    sides: dict[str, str] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header][:2] != ["user", "side"]:
            raise DataFormatError(f"{path}:1: expected header user,side")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise DataFormatError(f"{path}:{lineno}: expected user,side")
            user, side = row[0].strip(), row[1].strip()
            if side not in SIDES:
                raise DataFormatError(
                    f"{path}:{lineno}: unknown side label {side!r} (expected X or Y)"
                )
            if user in g:
                sides[user] = side
    missing = [u for u in g.vertices if u not in sides]
    if missing:
        raise DataFormatError(
            f"{path}: assignment missing vertex {missing[0]!r}"
            + (f" and {len(missing) - 1} more" if len(missing) > 1 else "")
        )
    if len(set(sides.values())) < 2:
        raise DataFormatError(f"{path}: both sides must be non-empty")
    return sides


def save_assignment(path, sides: Mapping[str, str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "side"])
        for user in sorted(sides):
            writer.writerow([user, sides[user]])
