"""Topic vectors for users and items, and the topic-diversity ranking.

Topics are named-entity-like terms. The default extractor is rule based
(hashtags plus runs of capitalized tokens); an annotation file, when
supplied, provides entities verbatim and bypasses the rules entirely.
"""

from __future__ import annotations

import csv
import math
import re
from typing import Iterable, Mapping

from .errors import DataFormatError
from .graph import ShareTable

TopicVector = dict[str, float]

_SENTENCE_RE = re.compile(r"[.!?]+")
_TOKEN_RE = re.compile(r"#?[\w']+")


def extract_topics(texts: Iterable[str]) -> TopicVector:
    """Rule-based topic terms with term frequencies.

    Hashtags are lowercased with '#' stripped; maximal runs of consecutive
    capitalized tokens within a sentence become one (lowercased) term each.
    """
    counts: TopicVector = {}

    def flush(run: list[str]) -> None:
        if run:
            term = " ".join(run).lower()
            counts[term] = counts.get(term, 0.0) + 1.0
            run.clear()

    for text in texts:
        for sentence in _SENTENCE_RE.split(text):
            run: list[str] = []
            for token in _TOKEN_RE.findall(sentence):
                if token.startswith("#"):
                    flush(run)
                    tag = token[1:]
                    if tag:
                        key = tag.lower()
                        counts[key] = counts.get(key, 0.0) + 1.0
                elif token[0].isalpha() and token[0].isupper():
                    run.append(token)
                else:
                    flush(run)
            flush(run)
    return counts


def cosine_similarity(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    """Cosine of two sparse term vectors; 0 when either is empty."""
    if not a or not b:
        return 0.0
    dot = sum(w * b[t] for t, w in a.items() if t in b)
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)


def diversity_ranking(
    user_vector: Mapping[str, float],
    item_vectors: Iterable[tuple[str, Mapping[str, float]]],
) -> list[tuple[str, float]]:
    """Items by ascending cosine similarity to the user vector, ties by item id."""
    scored = [
        (item, cosine_similarity(user_vector, vec)) for item, vec in item_vectors
    ]
    scored.sort(key=lambda pair: (pair[1], pair[0]))
    return scored


def load_annotations(path) -> tuple[dict[str, TopicVector], dict[str, TopicVector]]:
    """Read a ``scope,key,entity`` CSV into user and item topic vectors.

    Repeated (key, entity) rows accumulate weight.
    """
    users: dict[str, TopicVector] = {}
    items: dict[str, TopicVector] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header][:3] != [
            "scope",
            "key",
            "entity",
        ]:
            raise DataFormatError(f"{path}:1: expected header scope,key,entity")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 3:
                raise DataFormatError(f"{path}:{lineno}: expected scope,key,entity")
            scope, key, entity = row[0].strip(), row[1].strip(), row[2].strip()
            if scope == "user":
                target = users
            elif scope == "item":
                target = items
            else:
                raise DataFormatError(
                    f"{path}:{lineno}: scope must be 'user' or 'item', got {scope!r}"
                )
            if not key or not entity:
                raise DataFormatError(f"{path}:{lineno}: empty key or entity")
            vec = target.setdefault(key, {})
            term = entity.lower()
            vec[term] = vec.get(term, 0.0) + 1.0
    return users, items


def build_topic_vectors(
    shares: ShareTable,
    annotations: tuple[dict[str, TopicVector], dict[str, TopicVector]] | None = None,
) -> tuple[dict[str, TopicVector], dict[str, TopicVector]]:
    """Topic vectors for every sharing user and every shared item.

    With annotations, user vectors additionally absorb the entities of the
    items the user shared. Without annotations the share schema carries no
    text, so vectors are empty and the diversity factor degrades to its
    stated empty-vector convention.
    """
    ann_users, ann_items = annotations if annotations else ({}, {})
    item_vectors = {item: dict(ann_items.get(item, {})) for item in shares.items()}
    user_vectors: dict[str, TopicVector] = {}
    for user in shares.users():
        vec: TopicVector = dict(ann_users.get(user, {}))
        for item in sorted(shares.items_of(user)):
            for term, weight in item_vectors.get(item, {}).items():
                vec[term] = vec.get(term, 0.0) + weight
        user_vectors[user] = vec
    return user_vectors, item_vectors
