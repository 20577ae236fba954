"""Endorsement-graph data model, CSV ingestion, connectivity, hubs, and synthetic graphs.

The graph is directed: an edge (u, v) with weight w means "u endorsed
(retweeted) v w times". Random walks and degree computations run on the
symmetrized weighted graph; see :mod:`contrarec.polarization`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Mapping
from urllib.parse import parse_qsl, urlencode, urlsplit, urlunsplit

import numpy as np
from scipy.sparse import csr_matrix

from .errors import DataFormatError

SIDE_X = "X"
SIDE_Y = "Y"
SIDES = (SIDE_X, SIDE_Y)

EDGES_HEADER = ("source", "target")
SHARES_HEADER = ("user", "item_url", "tweet_id", "retweet_count", "timestamp")


@dataclass(frozen=True)
class ShareRecord:
    """One (user, item) share event. ``item`` is the normalized URL."""

    user: str
    item: str
    tweet_id: str
    retweet_count: int
    timestamp: float


class ShareTable:
    """Immutable collection of share records with per-user and per-item indexes."""

    def __init__(self, records: Iterable[ShareRecord]):
        self.records = tuple(records)
        by_item: dict[str, list[ShareRecord]] = {}
        by_user: dict[str, list[ShareRecord]] = {}
        for r in self.records:
            by_item.setdefault(r.item, []).append(r)
            by_user.setdefault(r.user, []).append(r)
        self._by_item = {k: tuple(v) for k, v in by_item.items()}
        self._by_user = {k: tuple(v) for k, v in by_user.items()}

    def items(self) -> tuple[str, ...]:
        return tuple(sorted(self._by_item))

    def users(self) -> tuple[str, ...]:
        return tuple(sorted(self._by_user))

    def sharers(self, item: str) -> frozenset[str]:
        return frozenset(r.user for r in self._by_item.get(item, ()))

    def records_for_item(self, item: str) -> tuple[ShareRecord, ...]:
        return self._by_item.get(item, ())

    def records_for_user(self, user: str) -> tuple[ShareRecord, ...]:
        return self._by_user.get(user, ())

    def items_of(self, user: str) -> frozenset[str]:
        return frozenset(r.item for r in self._by_user.get(user, ()))

    def __len__(self) -> int:
        return len(self.records)


class EndorsementGraph:
    """Directed weighted endorsement graph, immutable after construction.

    Vertices are sorted lexicographically; parallel input edges are merged
    into integer weights; self-loops are rejected at construction (ingestion
    drops and counts them before building the graph).
    """

    def __init__(
        self,
        edges: Mapping[tuple[str, str], int],
        vertices: Iterable[str] = (),
        self_loops_dropped: int = 0,
    ):
        vs = set(vertices)
        for (s, t), w in edges.items():
            if s == t:
                raise ValueError(f"self-loop {s!r} not allowed in a constructed graph")
            if w < 1:
                raise ValueError(f"edge ({s!r}, {t!r}) has non-positive weight {w}")
            vs.add(s)
            vs.add(t)
        self.vertices: tuple[str, ...] = tuple(sorted(vs))
        self.edges: dict[tuple[str, str], int] = {
            k: int(edges[k]) for k in sorted(edges)
        }
        self.self_loops_dropped = self_loops_dropped
        self._index = {u: i for i, u in enumerate(self.vertices)}

        out_adj: dict[str, dict[str, int]] = {u: {} for u in self.vertices}
        und_adj: dict[str, dict[str, int]] = {u: {} for u in self.vertices}
        for (s, t), w in self.edges.items():
            out_adj[s][t] = w
            und_adj[s][t] = und_adj[s].get(t, 0) + w
            und_adj[t][s] = und_adj[t].get(s, 0) + w
        self._out_adj = out_adj
        self._und_adj = und_adj
        self._und_csr = None

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, user: str) -> int:
        return self._index[user]

    def __contains__(self, user: str) -> bool:
        return user in self._index

    def out_neighbors(self, user: str) -> dict[str, int]:
        return self._out_adj[user]

    def neighbors(self, user: str) -> dict[str, int]:
        """Symmetrized neighborhood: weight(u,v) = w(u->v) + w(v->u)."""
        return self._und_adj[user]

    def weighted_degree(self, user: str) -> int:
        """Total endorsement volume touching ``user`` (in + out, weighted)."""
        return sum(self._und_adj[user].values())

    def total_weight(self) -> int:
        return sum(self.edges.values())

    def undirected_matrix(self) -> csr_matrix:
        """Symmetrized weighted adjacency as CSR, rows/cols in vertex order."""
        if self._und_csr is None:
            rows, cols, vals = [], [], []
            for u in self.vertices:
                iu = self._index[u]
                for v, w in sorted(self._und_adj[u].items()):
                    rows.append(iu)
                    cols.append(self._index[v])
                    vals.append(float(w))
            self._und_csr = csr_matrix(
                (vals, (rows, cols)), shape=(self.n, self.n), dtype=np.float64
            )
        return self._und_csr

    def subgraph(self, keep: Iterable[str]) -> "EndorsementGraph":
        keep_set = set(keep)
        edges = {
            (s, t): w
            for (s, t), w in self.edges.items()
            if s in keep_set and t in keep_set
        }
        return EndorsementGraph(
            edges, vertices=keep_set, self_loops_dropped=self.self_loops_dropped
        )


@dataclass(frozen=True)
class HubSet:
    """The k highest-degree vertices of one side, in descending-degree order."""

    side: str
    members: tuple[str, ...]

    def __contains__(self, user: str) -> bool:
        return user in self.members


def normalize_url(url: str) -> str:
    """Canonical item id: lowercase scheme/host, no fragment, no utm_* params."""
    parts = urlsplit(url.strip())
    query = urlencode(
        [
            (k, v)
            for k, v in parse_qsl(parts.query, keep_blank_values=True)
            if not k.lower().startswith("utm_")
        ]
    )
    return urlunsplit(
        (parts.scheme.lower(), parts.netloc.lower(), parts.path, query, "")
    )


def _read_rows(path, expected_header, min_fields):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: missing header row") from None
        got = tuple(h.strip().lower() for h in header)
        if got[: len(expected_header)] != expected_header:
            raise DataFormatError(
                f"{path}:1: expected header {','.join(expected_header)}, got {','.join(got)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < min_fields:
                raise DataFormatError(
                    f"{path}:{lineno}: expected at least {min_fields} fields, got {len(row)}"
                )
            yield lineno, row


def load_edges(path) -> EndorsementGraph:
    """Read the edges CSV (``source,target[,count]``) into a merged weighted graph.

    Duplicate rows accumulate weight; self-loop rows are dropped and counted
    on the returned graph's ``self_loops_dropped``.
    """
    weights: dict[tuple[str, str], int] = {}
    dropped = 0
    for lineno, row in _read_rows(path, EDGES_HEADER, 2):
        source = row[0].strip()
        target = row[1].strip()
        if not source or not target:
            raise DataFormatError(f"{path}:{lineno}: empty source or target")
        count = 1
        if len(row) > 2 and row[2].strip():
            try:
                count = int(row[2])
            except ValueError:
                raise DataFormatError(
                    f"{path}:{lineno}: count {row[2]!r} is not an integer"
                ) from None
            if count < 1:
                raise DataFormatError(f"{path}:{lineno}: count must be >= 1")
        if source == target:
            dropped += count
            continue
        key = (source, target)
        weights[key] = weights.get(key, 0) + count
    if not weights:
        raise DataFormatError(f"{path}: empty graph")
    return EndorsementGraph(weights, self_loops_dropped=dropped)


def load_shares(path) -> ShareTable:
    """Read the shares CSV (``user,item_url,tweet_id,retweet_count,timestamp``)."""
    records = []
    for lineno, row in _read_rows(path, SHARES_HEADER, 5):
        user = row[0].strip()
        if not user:
            raise DataFormatError(f"{path}:{lineno}: empty user")
        item = normalize_url(row[1])
        if not item:
            raise DataFormatError(f"{path}:{lineno}: empty item URL after normalization")
        try:
            retweets = int(row[3])
        except ValueError:
            raise DataFormatError(
                f"{path}:{lineno}: retweet_count {row[3]!r} is not an integer"
            ) from None
        if retweets < 0:
            raise DataFormatError(f"{path}:{lineno}: retweet_count must be >= 0")
        try:
            timestamp = float(row[4])
        except ValueError:
            raise DataFormatError(
                f"{path}:{lineno}: timestamp {row[4]!r} is not a number"
            ) from None
        records.append(ShareRecord(user, item, row[2].strip(), retweets, timestamp))
    return ShareTable(records)


def load_dataset(edges_path, shares_path) -> tuple[EndorsementGraph, ShareTable]:
    """Load the raw edge and share files of a topic."""
    return load_edges(edges_path), load_shares(shares_path)


def largest_connected_component(
    g: EndorsementGraph,
) -> tuple[EndorsementGraph, frozenset[str]]:
    """Largest weakly-connected component and the set of excluded users.

    Among equal-size components the one containing the lexicographically
    smallest vertex is kept. Idempotent.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    seen: set[str] = set()
    best: set[str] | None = None
    for start in g.vertices:  # sorted, so first max-size component found wins ties
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in g.neighbors(u):
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        if best is None or len(comp) > len(best):
            best = comp
    excluded = frozenset(set(g.vertices) - best)
    if not excluded:
        return g, excluded
    return g.subgraph(best), excluded


def top_k_hubs(
    g: EndorsementGraph, sides: Mapping[str, str], k: int
) -> tuple[HubSet, HubSet]:
    """The k highest weighted-degree vertices on each side.

    Ties break by ascending user id. Every vertex must carry a side label.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    members: dict[str, list[str]] = {SIDE_X: [], SIDE_Y: []}
    for u in g.vertices:
        side = sides.get(u)
        if side not in members:
            raise ValueError(f"vertex {u!r} has no side assignment")
        members[side].append(u)
    hubs = []
    for side in SIDES:
        users = members[side]
        if k > len(users):
            raise ValueError(
                f"k={k} exceeds side {side} size {len(users)}"
            )
        users.sort(key=lambda u: (-g.weighted_degree(u), u))
        hubs.append(HubSet(side, tuple(users[:k])))
    return hubs[0], hubs[1]


def synth_polarized_graph(
    n: int, p_in: float, p_out: float, seed: int
) -> tuple[EndorsementGraph, dict[str, str]]:
    """Two planted blocks of n/2 users with directed edge probabilities p_in / p_out.

    Deterministic for a given seed. Returns the graph and the planted side
    assignment (first block = X).
    """
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise ValueError("need 0 <= p_out <= p_in <= 1")
    rng = np.random.default_rng(seed)
    width = len(str(n - 1))
    ids = [f"u{i:0{width}d}" for i in range(n)]
    half = n // 2
    probs = np.full((n, n), p_out)
    probs[:half, :half] = p_in
    probs[half:, half:] = p_in
    mask = rng.random((n, n)) < probs
    np.fill_diagonal(mask, False)
    edges = {
        (ids[i], ids[j]): 1 for i, j in zip(*np.nonzero(mask))
    }
    planted = {ids[i]: (SIDE_X if i < half else SIDE_Y) for i in range(n)}
    graph = EndorsementGraph(edges, vertices=ids)
    return graph, planted


_VOCAB = {
    SIDE_X: (
        "reform", "march", "liberty", "ballot", "senate", "union",
        "mandate", "petition", "charter", "veto",
    ),
    SIDE_Y: (
        "heritage", "rally", "border", "tariff", "anthem", "parade",
        "statute", "doctrine", "tribunal", "accord",
    ),
}
_COMMON_VOCAB = ("election", "debate", "protest", "economy", "media")


def synth_share_table(
    sides: Mapping[str, str],
    seed: int,
    items_per_side: int = 20,
    mean_shares: float = 3.0,
    cross_rate: float = 0.15,
) -> tuple[ShareTable, dict[str, tuple[str, ...]], dict[str, tuple[str, ...]]]:
    """Synthetic share records plus topic annotations for a planted graph.

    Users mostly share items from their own side's pool (1 - cross_rate).
    Returns (shares, user entities, item entities); entity vocabularies are
    side-specific so topic diversity is informative downstream.
    """
    rng = np.random.default_rng(seed)
    pools = {
        side: [
            f"http://news.example/{side.lower()}/article-{i:03d}"
            for i in range(items_per_side)
        ]
        for side in SIDES
    }
    item_entities: dict[str, tuple[str, ...]] = {}
    for side in SIDES:
        vocab = _VOCAB[side]
        for item in pools[side]:
            k = 2 + int(rng.integers(0, 2))
            picks = [vocab[int(i)] for i in rng.choice(len(vocab), size=k, replace=False)]
            if rng.random() < 0.4:
                picks.append(_COMMON_VOCAB[int(rng.integers(0, len(_COMMON_VOCAB)))])
            item_entities[item] = tuple(dict.fromkeys(picks))

    records = []
    user_entities: dict[str, tuple[str, ...]] = {}
    counter = 0
    base_ts = 1_500_000_000.0
    for user in sorted(sides):
        own = sides[user]
        other = SIDE_Y if own == SIDE_X else SIDE_X
        n_shares = 1 + int(rng.poisson(max(mean_shares - 1.0, 0.0)))
        shared_items = []
        for _ in range(n_shares):
            pool = pools[other] if rng.random() < cross_rate else pools[own]
            item = pool[int(rng.integers(0, len(pool)))]
            retweets = int(rng.geometric(0.15)) - 1
            records.append(
                ShareRecord(user, item, f"t{counter:06d}", retweets, base_ts + counter)
            )
            shared_items.append(item)
            counter += 1
        terms: list[str] = []
        for item in shared_items[:3]:
            terms.extend(item_entities[item])
        user_entities[user] = tuple(dict.fromkeys(terms))
    return ShareTable(records), user_entities, item_entities
