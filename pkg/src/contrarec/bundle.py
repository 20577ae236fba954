"""Topic-directory artifact formats and the immutable bundle served to the UI.

Every pipeline stage reads its upstream artifacts from a topic directory and
writes its own as plain CSV/JSON. Writers iterate in sorted order and format
floats with repr, so re-running a stage on unchanged inputs reproduces the
artifact byte for byte.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from typing import Mapping

from .acceptance import AcceptanceModel, load_model
from .errors import DataFormatError, MissingArtifactError
from .graph import SIDE_X, SIDE_Y, EndorsementGraph, HubSet, ShareTable, load_shares
from .items import ItemScore
from .polarization import PolarizationProfile
from .recommend import FACTOR_LABELS, RankedList, Recommendation

EDGES_CSV = "edges.csv"
SHARES_CSV = "shares.csv"
ANNOTATIONS_CSV = "annotations.csv"
PLANTED_CSV = "planted_sides.csv"
GRAPH_JSON = "graph.json"
SIDES_CSV = "sides.csv"
HUBS_CSV = "hubs.csv"
SCORES_CSV = "scores.csv"
ITEM_SCORES_CSV = "item_scores.csv"
ACCEPTANCE_NE_CSV = "acceptance_Ne.csv"
ACCEPTANCE_NX_CSV = "acceptance_Nx.csv"
TOPICS_JSON = "topics.json"
LAYOUT_JSON = "layout.json"
FACTOR_LISTS_JSON = "factor_lists.json"
RECOMMENDATIONS_CSV = "recommendations.csv"
META_JSON = "meta.json"
DESCRIPTION_MD = "description.md"

# artifact -> pipeline stage that produces it
STAGE_OF = {
    EDGES_CSV: "synth",
    SHARES_CSV: "synth",
    GRAPH_JSON: "ingest",
    SIDES_CSV: "partition",
    HUBS_CSV: "score",
    SCORES_CSV: "score",
    ITEM_SCORES_CSV: "items",
    ACCEPTANCE_NE_CSV: "fit-acceptance",
    ACCEPTANCE_NX_CSV: "fit-acceptance",
    TOPICS_JSON: "topics",
    LAYOUT_JSON: "layout",
    FACTOR_LISTS_JSON: "bundle",
    META_JSON: "bundle",
}


def require(topic_dir, *artifacts) -> None:
    """Fail with the name of the missing upstream stage."""
    for name in artifacts:
        path = os.path.join(topic_dir, name)
        if not os.path.exists(path):
            stage = STAGE_OF.get(name, "?")
            raise MissingArtifactError(
                f"missing {name}; run the `{stage}` stage first", stage=stage
            )


def artifact(topic_dir, name) -> str:
    return os.path.join(topic_dir, name)


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def save_graph(path, g: EndorsementGraph, excluded, full_vertex_count: int) -> None:
    payload = {
        "vertices": list(g.vertices),
        "edges": [[s, t, w] for (s, t), w in sorted(g.edges.items())],
        "excluded": sorted(excluded),
        "self_loops_dropped": g.self_loops_dropped,
        "full_vertex_count": full_vertex_count,
    }
    _write_json(path, payload)


def load_graph(path) -> tuple[EndorsementGraph, frozenset[str]]:
    payload = _read_json(path)
    edges = {(s, t): int(w) for s, t, w in payload["edges"]}
    g = EndorsementGraph(
        edges,
        vertices=payload["vertices"],
        self_loops_dropped=payload.get("self_loops_dropped", 0),
    )
    return g, frozenset(payload.get("excluded", ()))


def save_hubs(path, hubs_x: HubSet, hubs_y: HubSet, g: EndorsementGraph) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["side", "rank", "user", "degree"])
        for hubs in (hubs_x, hubs_y):
            for rank, user in enumerate(hubs.members, start=1):
                writer.writerow([hubs.side, rank, user, g.weighted_degree(user)])


def load_hubs(path) -> tuple[HubSet, HubSet]:
    members: dict[str, list[tuple[int, str]]] = {SIDE_X: [], SIDE_Y: []}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            if not row:
                continue
            side, rank, user = row[0], int(row[1]), row[2]
            members[side].append((rank, user))
    return tuple(
        HubSet(side, tuple(user for _, user in sorted(members[side])))
        for side in (SIDE_X, SIDE_Y)
    )


def save_scores(path, profile: PolarizationProfile, sides: Mapping[str, str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "side", "lX", "lY", "rhoX", "rhoY", "rho"])
        for u in profile.users:
            writer.writerow(
                [
                    u,
                    sides[u],
                    repr(profile.l_x[u]),
                    repr(profile.l_y[u]),
                    repr(profile.rho_x[u]),
                    repr(profile.rho_y[u]),
                    repr(profile.rho[u]),
                ]
            )


def load_scores(path) -> tuple[PolarizationProfile, dict[str, str]]:
    l_x, l_y, rho_x, rho_y, rho, sides = {}, {}, {}, {}, {}, {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            if not row:
                continue
            u = row[0]
            sides[u] = row[1]
            l_x[u], l_y[u] = float(row[2]), float(row[3])
            rho_x[u], rho_y[u] = float(row[4]), float(row[5])
            rho[u] = float(row[6])
    profile = PolarizationProfile(l_x, l_y, rho_x, rho_y, rho)
    return profile, sides


def save_item_scores(path, scores: Mapping[str, ItemScore]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["item", "rho", "nX", "nY", "exclX", "exclY", "popularity"])
        for item in sorted(scores):
            s = scores[item]
            writer.writerow(
                [
                    item,
                    repr(s.rho),
                    s.n_x,
                    s.n_y,
                    repr(s.exclusivity_x),
                    repr(s.exclusivity_y),
                    s.popularity,
                ]
            )


def load_item_scores(path, shares: ShareTable) -> dict[str, ItemScore]:
    scores = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            if not row:
                continue
            item = row[0]
            scores[item] = ItemScore(
                item=item,
                rho=float(row[1]),
                sharers=shares.sharers(item),
                n_x=int(row[2]),
                n_y=int(row[3]),
                exclusivity_x=float(row[4]),
                exclusivity_y=float(row[5]),
                popularity=int(row[6]),
            )
    return scores


def save_topic_vectors(path, user_vectors, item_vectors) -> None:
    payload = {
        "users": {u: dict(sorted(v.items())) for u, v in sorted(user_vectors.items())},
        "items": {i: dict(sorted(v.items())) for i, v in sorted(item_vectors.items())},
    }
    _write_json(path, payload)


def load_topic_vectors(path):
    payload = _read_json(path)
    return payload["users"], payload["items"]


def save_layout(path, positions: Mapping[str, tuple[float, float]]) -> None:
    payload = [
        {"user": u, "x": positions[u][0], "y": positions[u][1]}
        for u in sorted(positions)
    ]
    _write_json(path, payload)


def load_layout(path) -> dict[str, tuple[float, float]]:
    return {row["user"]: (row["x"], row["y"]) for row in _read_json(path)}


def save_factor_lists(path, per_user: Mapping[str, dict]) -> None:
    payload = {
        user: {
            "pool": list(entry["pool"]),
            **{label: list(entry[label].items) for label in FACTOR_LABELS},
        }
        for user, entry in sorted(per_user.items())
    }
    _write_json(path, {"users": payload})


def load_factor_lists(path) -> dict[str, dict]:
    payload = _read_json(path)["users"]
    out = {}
    for user, entry in payload.items():
        out[user] = {
            "pool": tuple(entry["pool"]),
            **{
                label: RankedList(label, tuple(entry[label]))
                for label in FACTOR_LABELS
            },
        }
    return out


def save_recommendations(path, recs: list[Recommendation]) -> None:
    header = ["user", "rank", "item", "phi", "w1", "w2", "w3", "w4", "w5"] + [
        f"pos_{label}" for label in FACTOR_LABELS
    ]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for rec in recs:
            for entry in rec.items:
                row = [rec.user, entry.rank, entry.item, repr(rec.phi)]
                row += [repr(w) for w in rec.weights.values]
                row += [
                    entry.breakdown[label].position
                    if entry.breakdown[label].position is not None
                    else ""
                    for label in FACTOR_LABELS
                ]
                writer.writerow(row)


@dataclass
class TopicBundle:
    """Everything the query service needs for one topic, loaded once, read-only."""

    topic_id: str
    name: str
    graph: EndorsementGraph
    excluded: frozenset[str]
    sides: dict[str, str]
    hubs_x: HubSet
    hubs_y: HubSet
    profile: PolarizationProfile
    item_scores: dict[str, ItemScore]
    model: AcceptanceModel
    shares: ShareTable
    layout: dict[str, tuple[float, float]]
    factor_lists: dict[str, dict]
    default_weights: tuple[float, ...]
    description: str
    meta: dict

    @classmethod
    def load(cls, topic_dir) -> "TopicBundle":
        require(
            topic_dir,
            SHARES_CSV,
            GRAPH_JSON,
            SIDES_CSV,
            HUBS_CSV,
            SCORES_CSV,
            ITEM_SCORES_CSV,
            ACCEPTANCE_NE_CSV,
            ACCEPTANCE_NX_CSV,
            LAYOUT_JSON,
            FACTOR_LISTS_JSON,
            META_JSON,
        )
        meta = _read_json(artifact(topic_dir, META_JSON))
        graph, excluded = load_graph(artifact(topic_dir, GRAPH_JSON))
        shares = load_shares(artifact(topic_dir, SHARES_CSV))
        profile, sides = load_scores(artifact(topic_dir, SCORES_CSV))
        hubs_x, hubs_y = load_hubs(artifact(topic_dir, HUBS_CSV))
        item_scores = load_item_scores(artifact(topic_dir, ITEM_SCORES_CSV), shares)
        model = load_model(
            artifact(topic_dir, ACCEPTANCE_NE_CSV), artifact(topic_dir, ACCEPTANCE_NX_CSV)
        )
        layout = load_layout(artifact(topic_dir, LAYOUT_JSON))
        factor_lists = load_factor_lists(artifact(topic_dir, FACTOR_LISTS_JSON))

        vertex_set = set(graph.vertices)
        for label, keys in (
            ("scores", set(profile.users)),
            ("sides", set(sides)),
            ("layout", set(layout)),
        ):
            if keys != vertex_set:
                raise DataFormatError(
                    f"{topic_dir}: {label} cover a different vertex set than the graph"
                )

        description = ""
        desc_path = artifact(topic_dir, DESCRIPTION_MD)
        if os.path.exists(desc_path):
            with open(desc_path, encoding="utf-8") as fh:
                description = fh.read()

        return cls(
            topic_id=meta.get("id", os.path.basename(os.path.normpath(topic_dir))),
            name=meta.get("name", meta.get("id", "topic")),
            graph=graph,
            excluded=excluded,
            sides=sides,
            hubs_x=hubs_x,
            hubs_y=hubs_y,
            profile=profile,
            item_scores=item_scores,
            model=model,
            shares=shares,
            layout=layout,
            factor_lists=factor_lists,
            default_weights=tuple(meta.get("default_weights", (0.2,) * 5)),
            description=description,
            meta=meta,
        )
