from __future__ import annotations

import os
import sys
from dataclasses import dataclass

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # make `oracles` importable

from contrarec.acceptance import AcceptanceModel, fit_acceptance_model
from contrarec.graph import (
    EndorsementGraph,
    HubSet,
    ShareRecord,
    ShareTable,
    top_k_hubs,
)
from contrarec.items import ItemScore, score_items
from contrarec.polarization import (
    PolarizationProfile,
    expected_hitting_times,
    user_polarization,
)
from contrarec.topics import build_topic_vectors


@dataclass
class ToyTopic:
    """A hand-built 12-user, 7-item topic with every artifact computed."""

    graph: EndorsementGraph
    sides: dict[str, str]
    hubs_x: HubSet
    hubs_y: HubSet
    profile: PolarizationProfile
    shares: ShareTable
    item_scores: dict[str, ItemScore]
    model: AcceptanceModel
    user_topics: dict
    item_topics: dict


TOY_EDGES = {
    # side X: x01 is the authority; x06 is peripheral
    ("x02", "x01"): 3,
    ("x03", "x01"): 2,
    ("x04", "x01"): 2,
    ("x05", "x01"): 1,
    ("x06", "x01"): 1,
    ("x02", "x03"): 1,
    ("x04", "x05"): 1,
    ("x06", "x02"): 1,
    # side Y: y01 is the authority
    ("y02", "y01"): 3,
    ("y03", "y01"): 2,
    ("y04", "y01"): 2,
    ("y05", "y01"): 1,
    ("y06", "y01"): 1,
    ("y03", "y02"): 1,
    ("y05", "y04"): 1,
    ("y06", "y02"): 1,
    # weak cross-side ties keep the graph connected
    ("x05", "y01"): 1,
    ("y05", "x01"): 1,
}

TOY_SIDES = {f"x{i:02d}": "X" for i in range(1, 7)} | {
    f"y{i:02d}": "Y" for i in range(1, 7)
}

ITEM = {key: f"http://ex.org/{key}" for key in "abcdefg"}

TOY_SHARES = [
    # (user, item key, tweet id, retweets)
    ("x01", "a", "t01", 10),
    ("x02", "a", "t02", 4),
    ("x03", "e", "t03", 2),
    ("x04", "e", "t04", 7),
    ("y01", "b", "t05", 9),
    ("y02", "b", "t06", 1),
    ("y03", "b", "t07", 0),
    ("y01", "c", "t08", 5),
    ("x05", "c", "t09", 3),
    ("y04", "d", "t10", 6),
    ("y05", "d", "t11", 6),
    ("y06", "f", "t12", 1),
    ("y02", "g", "t13", 8),
    # the focal user x06 shared two items, leaving a 5-item pool
    ("x06", "a", "t14", 0),
    ("x06", "e", "t15", 1),
]

TOY_ITEM_ENTITIES = {
    "a": ("reform",),
    "b": ("kremlin", "protest"),
    "c": ("protest",),
    "d": ("kremlin", "sanctions"),
    "e": ("election",),
    "f": ("moscow",),
    "g": ("sanctions",),
}

TOY_USER_ENTITIES = {"x06": ("reform",), "y06": ("moscow",)}


def build_toy_topic(k_hubs: int = 2, alpha: float = 1.0) -> ToyTopic:
    graph = EndorsementGraph(TOY_EDGES)
    sides = dict(TOY_SIDES)
    hubs_x, hubs_y = top_k_hubs(graph, sides, k_hubs)
    l_x = expected_hitting_times(graph, hubs_x.members)
    l_y = expected_hitting_times(graph, hubs_y.members)
    profile = user_polarization(l_x, l_y)
    shares = ShareTable(
        ShareRecord(user, ITEM[key], tweet, rts, 1000.0 + i)
        for i, (user, key, tweet, rts) in enumerate(TOY_SHARES)
    )
    item_scores, _ = score_items(shares, profile, sides)
    model = fit_acceptance_model(graph, shares, profile, item_scores, alpha=alpha)
    annotations = (
        {u: {t: 1.0 for t in terms} for u, terms in TOY_USER_ENTITIES.items()},
        {ITEM[i]: {t: 1.0 for t in terms} for i, terms in TOY_ITEM_ENTITIES.items()},
    )
    user_topics, item_topics = build_topic_vectors(shares, annotations)
    return ToyTopic(
        graph=graph,
        sides=sides,
        hubs_x=hubs_x,
        hubs_y=hubs_y,
        profile=profile,
        shares=shares,
        item_scores=item_scores,
        model=model,
        user_topics=user_topics,
        item_topics=item_topics,
    )


@pytest.fixture(scope="session")
def toy() -> ToyTopic:
    return build_toy_topic()


def run_pipeline(topic_dir: str, **overrides) -> None:
    """Drive the CLI stages end to end on a synthetic dataset."""
    from contrarec.cli import main

    params = {
        "n": 40,
        "p_in": 0.35,
        "p_out": 0.05,
        "seed": 11,
        "items_per_side": 4,
        "k_hubs": 4,
        "layout_iterations": 150,
    }
    params.update(overrides)
    steps = [
        [
            "synth",
            "--topic-dir", topic_dir,
            "--n", str(params["n"]),
            "--p-in", str(params["p_in"]),
            "--p-out", str(params["p_out"]),
            "--seed", str(params["seed"]),
            "--items-per-side", str(params["items_per_side"]),
        ],
        ["ingest", "--topic-dir", topic_dir],
        ["partition", "--topic-dir", topic_dir, "--seed", str(params["seed"])],
        ["score", "--topic-dir", topic_dir, "--k-hubs", str(params["k_hubs"])],
        ["items", "--topic-dir", topic_dir],
        ["fit-acceptance", "--topic-dir", topic_dir],
        ["topics", "--topic-dir", topic_dir],
        [
            "layout",
            "--topic-dir", topic_dir,
            "--seed", str(params["seed"]),
            "--iterations", str(params["layout_iterations"]),
        ],
        ["recommend", "--topic-dir", topic_dir, "--all", "--seed", str(params["seed"])],
        ["bundle", "--topic-dir", topic_dir],
    ]
    for step in steps:
        code = main(step)
        assert code == 0, f"stage {step[0]} failed with exit {code}"


@pytest.fixture(scope="session")
def synth_bundle_dir(tmp_path_factory) -> str:
    topic_dir = str(tmp_path_factory.mktemp("topics") / "synthetic")
    run_pipeline(topic_dir)
    return topic_dir
