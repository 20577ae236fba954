"""Read-only JSON query service over precomputed topic bundles.

Endpoints:
    GET /topics
    GET /topics/{id}/graph
    GET /topics/{id}/users/{uid}?w1=..&w2=..&w3=..&w4=..&w5=..&seed=..

Bundles are immutable shared state; each request re-aggregates cached factor
lists under the requested weights (never re-running upstream scoring), so an
identical request, seed included, yields an identical response body.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .bundle import TopicBundle
from .errors import EmptyPoolError
from .recommend import (
    FACTOR_LABELS,
    FactorWeights,
    assemble_recommendation,
    random_baseline,
)

DEFAULT_SEED = 0


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _parse_weights(bundle: TopicBundle, raw: dict[str, float | None]) -> FactorWeights:
    given = {k: v for k, v in raw.items() if v is not None}
    if not given:
        return FactorWeights.of(bundle.default_weights)
    values = [raw.get(f"w{i}") or 0.0 for i in range(1, 6)]
    return FactorWeights.of(values)


def sample_endorsed_tweets(bundle: TopicBundle, user: str, seed: int, n: int = 3):
    """Up to n tweets by users this user has endorsed, sampled deterministically."""
    records = []
    for neighbor in sorted(bundle.graph.out_neighbors(user)):
        records.extend(bundle.shares.records_for_user(neighbor))
    records.sort(key=lambda r: (r.user, r.tweet_id, r.item))
    if not records:
        return []
    rng = np.random.default_rng(seed)
    take = min(n, len(records))
    picks = sorted(int(i) for i in rng.choice(len(records), size=take, replace=False))
    return [
        {
            "author": records[i].user,
            "tweet_id": records[i].tweet_id,
            "item": records[i].item,
            "retweet_count": records[i].retweet_count,
        }
        for i in picks
    ]


def _user_detail(topic_id: str, bundle: TopicBundle, user: str, weights: FactorWeights, seed: int):
    entry = bundle.factor_lists[user]
    pool = entry["pool"]
    lists = {label: entry[label] for label in FACTOR_LABELS}
    rec = assemble_recommendation(
        user,
        lists,
        pool,
        weights,
        bundle.item_scores,
        bundle.graph.vertices,
        n=3,
        seed=seed,
    )
    exclude = [it.item for it in rec.items]
    try:
        baseline = random_baseline(pool, exclude, n=3, seed=seed)
    except EmptyPoolError:
        baseline = []
    vertex_set = set(bundle.graph.vertices)

    return {
        "topic": topic_id,
        "user": user,
        "side": bundle.sides[user],
        "rho": bundle.profile.rho[user],
        "profile_url": f"https://twitter.com/{user}",
        "seed": seed,
        "weights": {
            label: w for label, w in zip(FACTOR_LABELS, weights.values)
        },
        "endorsed_tweets": sample_endorsed_tweets(bundle, user, seed),
        "recommendations": [
            {
                "rank": it.rank,
                "item": it.item,
                "rho": it.rho,
                "phi": rec.phi,
                "breakdown": {
                    label: {
                        "weight": b.weight,
                        "position": b.position,
                        "contribution": b.contribution,
                    }
                    for label, b in it.breakdown.items()
                },
                "sharers": list(it.sharers),
            }
            for it in rec.items
        ],
        "random_baseline": [
            {
                "item": item,
                "sharers": sorted(bundle.item_scores[item].sharers & vertex_set),
            }
            for item in baseline
        ],
        "short_pool": rec.short_pool,
    }


def create_app(
    bundles: Mapping[str, TopicBundle],
    default_seed: int = DEFAULT_SEED,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="contrarec", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )
    topics = dict(sorted(bundles.items()))

    @app.exception_handler(HTTPException)
    async def http_error(_req: Request, exc: HTTPException):
        if isinstance(exc.detail, dict):
            return _error(
                exc.status_code, exc.detail.get("code", "error"), exc.detail["message"]
            )
        return _error(exc.status_code, "error", str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def validation_error(_req: Request, exc: RequestValidationError):
        return _error(400, "invalid_request", str(exc.errors()[:1]))

    @app.get("/topics")
    def topic_index():
        return [
            {
                "id": tid,
                "name": b.name,
                "vertices": b.graph.n,
                "edges": len(b.graph.edges),
                "side_x": sum(1 for s in b.sides.values() if s == "X"),
                "side_y": sum(1 for s in b.sides.values() if s == "Y"),
                "excluded": len(b.excluded),
            }
            for tid, b in topics.items()
        ]

    @app.get("/topics/{topic_id}/graph")
    def topic_graph(topic_id: str):
        bundle = topics.get(topic_id)
        if bundle is None:
            raise HTTPException(404, {"code": "not_found", "message": f"unknown topic {topic_id!r}"})
        hubs = set(bundle.hubs_x.members) | set(bundle.hubs_y.members)
        return {
            "topic": topic_id,
            "name": bundle.name,
            "description": bundle.description,
            "nodes": [
                {
                    "user": u,
                    "x": bundle.layout[u][0],
                    "y": bundle.layout[u][1],
                    "side": bundle.sides[u],
                    "rho": bundle.profile.rho[u],
                    "degree": bundle.graph.weighted_degree(u),
                    "hub": u in hubs,
                }
                for u in bundle.graph.vertices
            ],
            "edges": [
                {"source": s, "target": t, "weight": w}
                for (s, t), w in sorted(bundle.graph.edges.items())
            ],
        }

    @app.get("/topics/{topic_id}/users/{user_id}")
    def user_detail(
        topic_id: str,
        user_id: str,
        w1: float | None = None,
        w2: float | None = None,
        w3: float | None = None,
        w4: float | None = None,
        w5: float | None = None,
        seed: int | None = None,
    ):
        bundle = topics.get(topic_id)
        if bundle is None:
            raise HTTPException(404, {"code": "not_found", "message": f"unknown topic {topic_id!r}"})
        if user_id not in bundle.factor_lists:
            raise HTTPException(404, {"code": "not_found", "message": f"unknown user {user_id!r}"})
        try:
            weights = _parse_weights(
                bundle, {"w1": w1, "w2": w2, "w3": w3, "w4": w4, "w5": w5}
            )
        except ValueError as exc:
            raise HTTPException(400, {"code": "invalid_weights", "message": str(exc)})
        return _user_detail(
            topic_id, bundle, user_id, weights, default_seed if seed is None else seed
        )

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app
