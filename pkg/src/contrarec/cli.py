"""Pipeline driver: stage subcommands over a topic directory.

Each stage reads the previous stage's artifacts and writes its own, so the
whole pipeline is re-runnable and inspectable. Exit codes: 0 success,
1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import bundle as bd
from .acceptance import fit_acceptance_model, save_model
from .errors import ContrarecError, EmptyPoolError
from .graph import (
    EndorsementGraph,
    largest_connected_component,
    load_dataset,
    synth_polarized_graph,
    synth_share_table,
    top_k_hubs,
)
from .items import score_items
from .layout import compute_layout
from .partition import load_assignment, partition, save_assignment
from .polarization import expected_hitting_times, user_polarization
from .recommend import (
    WEIGHT_PRESETS,
    FactorWeights,
    assemble_recommendation,
    build_candidate_pool,
    build_factor_lists,
)
from .topics import build_topic_vectors, load_annotations


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_weights(text: str) -> FactorWeights:
    if text in WEIGHT_PRESETS:
        return FactorWeights.preset(text)
    parts = text.split(",")
    if len(parts) != 5:
        raise _UsageError(
            f"--weights expects five comma-separated numbers or one of "
            f"{sorted(WEIGHT_PRESETS)}, got {text!r}"
        )
    try:
        return FactorWeights.of(float(p) for p in parts)
    except ValueError as exc:
        raise _UsageError(f"bad --weights: {exc}") from None


def _write_meta(topic_dir, updates: dict) -> None:
    path = bd.artifact(topic_dir, bd.META_JSON)
    meta = {}
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            meta = json.load(fh)
    meta.update(updates)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dict(sorted(meta.items())), fh, indent=2)
        fh.write("\n")


def cmd_synth(args) -> int:
    os.makedirs(args.topic_dir, exist_ok=True)
    graph, planted = synth_polarized_graph(args.n, args.p_in, args.p_out, args.seed)
    shares, user_entities, item_entities = synth_share_table(
        planted, args.seed, items_per_side=args.items_per_side
    )

    with open(bd.artifact(args.topic_dir, bd.EDGES_CSV), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source", "target", "count"])
        for (s, t), w in sorted(graph.edges.items()):
            writer.writerow([s, t, w])

    with open(bd.artifact(args.topic_dir, bd.SHARES_CSV), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "item_url", "tweet_id", "retweet_count", "timestamp"])
        for r in shares.records:
            writer.writerow([r.user, r.item, r.tweet_id, r.retweet_count, repr(r.timestamp)])

    with open(bd.artifact(args.topic_dir, bd.ANNOTATIONS_CSV), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scope", "key", "entity"])
        for user in sorted(user_entities):
            for entity in user_entities[user]:
                writer.writerow(["user", user, entity])
        for item in sorted(item_entities):
            for entity in item_entities[item]:
                writer.writerow(["item", item, entity])

    save_assignment(bd.artifact(args.topic_dir, bd.PLANTED_CSV), planted)
    with open(bd.artifact(args.topic_dir, bd.DESCRIPTION_MD), "w", encoding="utf-8") as fh:
        fh.write(
            f"# {args.name}\n\n"
            f"Synthetic two-sided discussion: {args.n} users in two planted "
            f"blocks (within-block edge probability {args.p_in}, cross-block "
            f"{args.p_out}, seed {args.seed}).\n\n"
            "Side X leans on civic-reform sources, side Y on heritage outlets; "
            "most users endorse and share within their own block, which is "
            "exactly the echo-chamber pattern the explorer visualizes.\n"
        )
    _write_meta(
        args.topic_dir,
        {
            "id": os.path.basename(os.path.normpath(args.topic_dir)),
            "name": args.name,
            "seed": args.seed,
            "synth": {"n": args.n, "p_in": args.p_in, "p_out": args.p_out},
        },
    )
    print(
        f"synth: {graph.n} users, {len(graph.edges)} edges, "
        f"{len(shares)} share records -> {args.topic_dir}"
    )
    return 0


def cmd_ingest(args) -> int:
    edges_path = args.edges or bd.artifact(args.topic_dir, bd.EDGES_CSV)
    shares_path = args.shares or bd.artifact(args.topic_dir, bd.SHARES_CSV)
    for path, flag in ((edges_path, "--edges"), (shares_path, "--shares")):
        if not os.path.exists(path):
            raise ContrarecError(
                f"missing input {path}; run the `synth` stage or pass {flag}"
            )
    graph, shares = load_dataset(edges_path, shares_path)
    component, excluded = largest_connected_component(graph)
    os.makedirs(args.topic_dir, exist_ok=True)
    if args.edges or args.shares:
        # keep the topic directory self-contained for later stages
        _copy_normalized(edges_path, shares_path, args.topic_dir, shares)
    bd.save_graph(
        bd.artifact(args.topic_dir, bd.GRAPH_JSON), component, excluded, graph.n
    )
    print(
        f"ingest: component {component.n}/{graph.n} users, "
        f"{len(component.edges)} edges, {component.self_loops_dropped} self-loops dropped, "
        f"{len(excluded)} users excluded"
    )
    return 0


def _copy_normalized(edges_path, shares_path, topic_dir, shares) -> None:
    dst_edges = bd.artifact(topic_dir, bd.EDGES_CSV)
    if os.path.abspath(edges_path) != os.path.abspath(dst_edges):
        with open(edges_path, encoding="utf-8") as src, open(
            dst_edges, "w", encoding="utf-8"
        ) as dst:
            dst.write(src.read())
    dst_shares = bd.artifact(topic_dir, bd.SHARES_CSV)
    if os.path.abspath(shares_path) != os.path.abspath(dst_shares):
        with open(dst_shares, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["user", "item_url", "tweet_id", "retweet_count", "timestamp"])
            for r in shares.records:
                writer.writerow(
                    [r.user, r.item, r.tweet_id, r.retweet_count, repr(r.timestamp)]
                )


def _load_graph(topic_dir) -> tuple[EndorsementGraph, frozenset[str]]:
    bd.require(topic_dir, bd.GRAPH_JSON)
    return bd.load_graph(bd.artifact(topic_dir, bd.GRAPH_JSON))


def cmd_partition(args) -> int:
    graph, _ = _load_graph(args.topic_dir)
    if args.assignment:
        sides = load_assignment(args.assignment, graph)
    else:
        sides = partition(graph, seed=args.seed)
    save_assignment(bd.artifact(args.topic_dir, bd.SIDES_CSV), sides)
    n_x = sum(1 for s in sides.values() if s == "X")
    print(f"partition: side X {n_x} users, side Y {len(sides) - n_x} users")
    return 0


def cmd_score(args) -> int:
    graph, _ = _load_graph(args.topic_dir)
    bd.require(args.topic_dir, bd.SIDES_CSV)
    sides = load_assignment(bd.artifact(args.topic_dir, bd.SIDES_CSV), graph)
    hubs_x, hubs_y = top_k_hubs(graph, sides, args.k_hubs)
    l_x = expected_hitting_times(graph, hubs_x.members)
    l_y = expected_hitting_times(graph, hubs_y.members)
    profile = user_polarization(l_x, l_y)
    bd.save_hubs(bd.artifact(args.topic_dir, bd.HUBS_CSV), hubs_x, hubs_y, graph)
    bd.save_scores(bd.artifact(args.topic_dir, bd.SCORES_CSV), profile, sides)
    _write_meta(args.topic_dir, {"k_hubs": args.k_hubs})
    print(f"score: {len(profile.users)} users scored (k={args.k_hubs} hubs per side)")
    return 0


def _load_scored(topic_dir):
    graph, _ = _load_graph(topic_dir)
    bd.require(topic_dir, bd.SCORES_CSV, bd.SHARES_CSV)
    profile, sides = bd.load_scores(bd.artifact(topic_dir, bd.SCORES_CSV))
    shares = bd.load_shares(bd.artifact(topic_dir, bd.SHARES_CSV))
    return graph, profile, sides, shares


def cmd_items(args) -> int:
    _, profile, sides, shares = _load_scored(args.topic_dir)
    scores, excluded = score_items(shares, profile, sides)
    bd.save_item_scores(bd.artifact(args.topic_dir, bd.ITEM_SCORES_CSV), scores)
    print(f"items: {len(scores)} items scored, {len(excluded)} excluded (no scored sharer)")
    return 0


def cmd_fit_acceptance(args) -> int:
    graph, profile, _, shares = _load_scored(args.topic_dir)
    bd.require(args.topic_dir, bd.ITEM_SCORES_CSV)
    item_scores = bd.load_item_scores(
        bd.artifact(args.topic_dir, bd.ITEM_SCORES_CSV), shares
    )
    model = fit_acceptance_model(
        graph, shares, profile, item_scores, n_buckets=args.buckets, alpha=args.alpha
    )
    save_model(
        model,
        bd.artifact(args.topic_dir, bd.ACCEPTANCE_NE_CSV),
        bd.artifact(args.topic_dir, bd.ACCEPTANCE_NX_CSV),
    )
    _write_meta(args.topic_dir, {"buckets": args.buckets, "alpha": args.alpha})
    print(
        f"fit-acceptance: {int(model.exposed.sum())} exposures, "
        f"{int(model.endorsed.sum())} endorsements over {args.buckets}x{args.buckets} buckets"
    )
    return 0


def cmd_topics(args) -> int:
    bd.require(args.topic_dir, bd.SHARES_CSV)
    shares = bd.load_shares(bd.artifact(args.topic_dir, bd.SHARES_CSV))
    ann_path = args.annotations or bd.artifact(args.topic_dir, bd.ANNOTATIONS_CSV)
    annotations = load_annotations(ann_path) if os.path.exists(ann_path) else None
    users, items = build_topic_vectors(shares, annotations)
    bd.save_topic_vectors(bd.artifact(args.topic_dir, bd.TOPICS_JSON), users, items)
    source = "annotations" if annotations else "none (empty vectors)"
    print(f"topics: {len(users)} user vectors, {len(items)} item vectors, source: {source}")
    return 0


def cmd_layout(args) -> int:
    graph, _ = _load_graph(args.topic_dir)
    positions = compute_layout(graph, seed=args.seed, iterations=args.iterations)
    bd.save_layout(bd.artifact(args.topic_dir, bd.LAYOUT_JSON), positions)
    print(f"layout: {len(positions)} positions over {args.iterations} iterations")
    return 0


def _load_recommender_state(topic_dir):
    graph, profile, sides, shares = _load_scored(topic_dir)
    bd.require(
        topic_dir,
        bd.HUBS_CSV,
        bd.ITEM_SCORES_CSV,
        bd.ACCEPTANCE_NE_CSV,
        bd.ACCEPTANCE_NX_CSV,
        bd.TOPICS_JSON,
    )
    hubs_x, hubs_y = bd.load_hubs(bd.artifact(topic_dir, bd.HUBS_CSV))
    item_scores = bd.load_item_scores(bd.artifact(topic_dir, bd.ITEM_SCORES_CSV), shares)
    model = bd.load_model(
        bd.artifact(topic_dir, bd.ACCEPTANCE_NE_CSV),
        bd.artifact(topic_dir, bd.ACCEPTANCE_NX_CSV),
    )
    user_topics, item_topics = bd.load_topic_vectors(bd.artifact(topic_dir, bd.TOPICS_JSON))
    return graph, profile, sides, shares, hubs_x, hubs_y, item_scores, model, user_topics, item_topics


def _factor_lists_for(state, user):
    graph, profile, sides, shares, hubs_x, hubs_y, item_scores, model, ut, it = state
    pool = build_candidate_pool(user, shares, item_scores)
    lists = build_factor_lists(
        graph, user, pool, sides, hubs_x, hubs_y, profile, item_scores, model,
        ut, it, shares,
    )
    return pool, lists


def cmd_recommend(args) -> int:
    state = _load_recommender_state(args.topic_dir)
    graph, profile = state[0], state[1]
    item_scores = state[6]
    weights = _parse_weights(args.weights)

    users = sorted(profile.users) if args.all else [args.user]
    if users == [None]:
        raise _UsageError("recommend requires --user or --all")
    recs = []
    for user in users:
        if user not in profile:
            raise ContrarecError(f"unknown user {user!r}")
        try:
            pool, lists = _factor_lists_for(state, user)
        except EmptyPoolError:
            if args.all:
                continue
            raise
        rec = assemble_recommendation(
            user, lists, pool, weights, item_scores, graph.vertices,
            n=args.top, seed=args.seed,
        )
        recs.append(rec)
        if not args.all:
            print(f"recommendations for {user} (phi={rec.phi!r}):")
            for entry in rec.items:
                print(f"  {entry.rank}. {entry.item}  rho_item={entry.rho:+.3f}")
    if args.all or args.out:
        out = args.out or bd.artifact(args.topic_dir, bd.RECOMMENDATIONS_CSV)
        bd.save_recommendations(out, recs)
        print(f"recommend: wrote {sum(len(r.items) for r in recs)} rows to {out}")
    return 0


def cmd_bundle(args) -> int:
    state = _load_recommender_state(args.topic_dir)
    bd.require(args.topic_dir, bd.LAYOUT_JSON)
    graph, profile = state[0], state[1]
    per_user = {}
    skipped = 0
    for user in profile.users:
        try:
            pool, lists = _factor_lists_for(state, user)
        except EmptyPoolError:
            skipped += 1
            continue
        per_user[user] = {"pool": pool, **lists}
    bd.save_factor_lists(bd.artifact(args.topic_dir, bd.FACTOR_LISTS_JSON), per_user)
    weights = _parse_weights(args.weights)
    _write_meta(
        args.topic_dir,
        {
            "id": os.path.basename(os.path.normpath(args.topic_dir)),
            "default_weights": list(weights.values),
            "counts": {
                "vertices": graph.n,
                "edges": len(graph.edges),
                "items": len(state[6]),
                "users_with_recommendations": len(per_user),
            },
        },
    )
    if args.name:
        _write_meta(args.topic_dir, {"name": args.name})
    print(
        f"bundle: cached factor lists for {len(per_user)} users "
        f"({skipped} skipped with empty pools) -> {args.topic_dir}"
    )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .bundle import TopicBundle
    from .service import create_app

    bundles = {}
    for topic_dir in args.topic_dir:
        b = TopicBundle.load(topic_dir)
        bundles[b.topic_id] = b
    app = create_app(bundles, default_seed=args.seed, static_dir=args.static)
    print(f"serving {len(bundles)} topic(s) on {args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="contrarec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        if name != "serve":
            p.add_argument("--topic-dir", required=True, help="topic artifact directory")
        return p

    p = add("synth", cmd_synth, help="generate a synthetic polarized dataset")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--p-in", type=float, default=0.3)
    p.add_argument("--p-out", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--items-per-side", type=int, default=20)
    p.add_argument("--name", default="synthetic topic")

    p = add("ingest", cmd_ingest, help="load edges/shares, keep the largest component")
    p.add_argument("--edges")
    p.add_argument("--shares")

    p = add("partition", cmd_partition, help="split the component into sides X/Y")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--assignment", help="import a user,side CSV instead of partitioning")

    p = add("score", cmd_score, help="hitting times and polarization scores")
    p.add_argument("--k-hubs", type=int, default=10)

    add("items", cmd_items, help="per-item polarity, exclusivity, popularity")

    p = add("fit-acceptance", cmd_fit_acceptance, help="fit the acceptance model")
    p.add_argument("--buckets", type=int, default=10)
    p.add_argument("--alpha", type=float, default=1.0)

    p = add("topics", cmd_topics, help="topic vectors for users and items")
    p.add_argument("--annotations", help="scope,key,entity CSV (default: annotations.csv)")

    p = add("layout", cmd_layout, help="force-directed 2-D layout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=500)

    p = add("recommend", cmd_recommend, help="aggregate factor lists for users")
    p.add_argument("--user")
    p.add_argument("--all", action="store_true", help="write CSV for every scored user")
    p.add_argument("--weights", default="uniform")
    p.add_argument("--top", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = add("bundle", cmd_bundle, help="validate artifacts and cache factor lists")
    p.add_argument("--weights", default="uniform", help="default serving weights")
    p.add_argument("--name")

    p = add("serve", cmd_serve, help="serve loaded bundles over HTTP")
    p.add_argument("--topic-dir", action="append", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--seed", type=int, default=0, help="default sampling seed")
    p.add_argument("--static", help="directory of explorer static files to mount at /")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.fn(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ContrarecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
