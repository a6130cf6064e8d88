"""Tweet corpus loading, keyword filtering, sampling, and splitting.

The corpus file format is line-delimited JSON, one object per line with
fields ``id``, ``text``, ``urls``, ``date`` and optionally ``lang``.
Labeled datasets are CSV with header ``tweet_id,text,label``.
"""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from misinfo.errors import DataFormatError, ValidationError
from misinfo.features.text import tokenize

FINAL_LABELS = ("irrelevant", "true", "misinformation")

# Malay-context exclusion phrases used to weed out Malaysian tweets that the
# platform language identifier tagged as Indonesian.
MALAY_EXCLUSION_PHRASES = ("malaysia", "kkmputrajaya", "kes baharu")

SPLIT_NAMES = ("train", "val", "test")


@dataclass(frozen=True)
class Tweet:
    """One social-media post."""

    id: str
    text: str
    urls: tuple[str, ...] = ()
    posted_at: date | None = None
    lang_tag: str | None = None
    source: str = "crawl"

    def __post_init__(self):
        if not self.id:
            raise ValidationError("tweet id must be non-empty")
        if not self.text.strip():
            raise ValidationError(f"tweet {self.id!r} has empty text")
        if self.source not in ("crawl", "archive"):
            raise ValidationError(f"unknown tweet source {self.source!r}")


@dataclass(frozen=True)
class KeywordQuery:
    """A set of phrases to match against tweet text at token boundaries.

    Phrases are normalized (lowercased, whitespace collapsed) on
    construction. ``mode`` is ``include`` (keep tweets matching at least one
    phrase) or ``exclude`` (keep tweets matching none).
    """

    phrases: tuple[str, ...]
    mode: str = "include"

    def __post_init__(self):
        if self.mode not in ("include", "exclude"):
            raise ValidationError(f"unknown query mode {self.mode!r}")
        normalized = tuple(" ".join(p.lower().split()) for p in self.phrases)
        if not normalized or any(not p for p in normalized):
            raise ValidationError("query phrases must be non-empty")
        object.__setattr__(self, "phrases", normalized)


@dataclass(frozen=True)
class LabeledTweet:
    """A tweet carrying one of the three final dataset labels."""

    tweet: Tweet
    label: str

    def __post_init__(self):
        if self.label not in FINAL_LABELS:
            raise ValidationError(
                f"label {self.label!r} not in {FINAL_LABELS} (tweet {self.tweet.id!r})"
            )


def load_corpus(path: str | Path) -> list[Tweet]:
    """Load a line-delimited JSON corpus file.

    Raises DataFormatError for malformed lines (with the line number) and
    ValidationError for duplicate tweet ids.
    """
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"corpus file not found: {path}")
    tweets: list[Tweet] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                tweet = Tweet(
                    id=str(raw["id"]),
                    text=raw["text"],
                    urls=tuple(raw.get("urls") or ()),
                    posted_at=date.fromisoformat(raw["date"]) if raw.get("date") else None,
                    lang_tag=raw.get("lang"),
                    source=raw.get("source", "crawl"),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DataFormatError(f"{path}:{lineno}: malformed corpus line: {exc}") from exc
            if tweet.id in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate tweet id {tweet.id!r}")
            seen.add(tweet.id)
            tweets.append(tweet)
    return tweets


def save_corpus(tweets: list[Tweet], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for t in tweets:
            record = {"id": t.id, "text": t.text, "urls": list(t.urls)}
            if t.posted_at is not None:
                record["date"] = t.posted_at.isoformat()
            if t.lang_tag is not None:
                record["lang"] = t.lang_tag
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_labeled(path: str | Path) -> list[LabeledTweet]:
    """Load a labeled dataset CSV (header ``tweet_id,text,label`` required)."""
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"dataset file not found: {path}")
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"tweet_id", "text", "label"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise DataFormatError(
                f"{path}: expected header with columns tweet_id,text,label"
            )
        out: list[LabeledTweet] = []
        seen: set[str] = set()
        for lineno, row in enumerate(reader, start=2):
            tweet_id = row["tweet_id"]
            if tweet_id in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate tweet id {tweet_id!r}")
            seen.add(tweet_id)
            try:
                out.append(LabeledTweet(Tweet(id=tweet_id, text=row["text"]), row["label"]))
            except ValidationError as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from exc
    return out


def save_labeled(data: list[LabeledTweet], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tweet_id", "text", "label"])
        for item in data:
            writer.writerow([item.tweet.id, item.tweet.text, item.label])


def _phrase_in_tokens(phrase_tokens: tuple[str, ...], tokens: tuple[str, ...]) -> bool:
    width = len(phrase_tokens)
    if width == 0 or width > len(tokens):
        return False
    return any(tokens[i : i + width] == phrase_tokens for i in range(len(tokens) - width + 1))


def filter_keywords(corpus: list[Tweet], query: KeywordQuery) -> list[Tweet]:
    """Keep tweets matching (include) or not matching (exclude) the query.

    Matching is token-boundary over the shared preprocessing, so a phrase
    hits only whole tokens ("masker" does not match "maskerade"). Relative
    order is preserved and the operation is idempotent.
    """
    phrase_tokens = [tokenize(p) for p in query.phrases]
    keep_on_match = query.mode == "include"
    kept = []
    for tweet in corpus:
        tokens = tokenize(tweet.text)
        matched = any(_phrase_in_tokens(p, tokens) for p in phrase_tokens)
        if matched == keep_on_match:
            kept.append(tweet)
    return kept


def top_ngrams(corpus: list[Tweet], n: int, k: int) -> list[tuple[str, int]]:
    """Most frequent token n-grams, descending count, ties lexicographic."""
    if n < 1 or k < 1:
        raise ValidationError("n and k must be >= 1")
    counts: Counter[str] = Counter()
    for tweet in corpus:
        tokens = tokenize(tweet.text)
        for i in range(len(tokens) - n + 1):
            counts[" ".join(tokens[i : i + n])] += 1
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def sample(corpus: list[Tweet], count: int, seed: int) -> list[Tweet]:
    """Uniform sample without replacement, deterministic for a fixed seed."""
    if count < 0 or count > len(corpus):
        raise ValidationError(
            f"sample count {count} out of range for corpus of {len(corpus)}"
        )
    rng = np.random.default_rng(seed)
    indices = rng.choice(len(corpus), size=count, replace=False)
    return [corpus[i] for i in indices]


def _apportion(n: int, ratios: tuple[float, ...]) -> list[int]:
    """Largest-remainder allocation of n items across the ratios.

    Keeps every allocation within 1 of its exact share; remainder ties go to
    the earlier split.
    """
    exact = [r * n for r in ratios]
    counts = [math.floor(e) for e in exact]
    leftover = n - sum(counts)
    order = sorted(range(len(ratios)), key=lambda s: (-(exact[s] - counts[s]), s))
    for s in order[:leftover]:
        counts[s] += 1
    return counts


def stratified_split(
    data: list[LabeledTweet],
    ratios: tuple[float, float, float],
    seed: int,
) -> tuple[list[LabeledTweet], list[LabeledTweet], list[LabeledTweet]]:
    """Split per-class into train/val/test with at most 1 item rounding drift.

    Class membership of each split is randomized by ``seed``; within a split
    the original input order is preserved.
    """
    if len(ratios) != len(SPLIT_NAMES):
        raise ValidationError("exactly three split ratios are required")
    if any(r <= 0 for r in ratios):
        raise ValidationError("split ratios must be positive")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValidationError(f"split ratios must sum to 1, got {sum(ratios)}")

    by_class: dict[str, list[int]] = {}
    for idx, item in enumerate(data):
        by_class.setdefault(item.label, []).append(idx)

    rng = np.random.default_rng(seed)
    split_indices: tuple[list[int], ...] = ([], [], [])
    for label in sorted(by_class):
        members = by_class[label]
        if len(members) < len(SPLIT_NAMES):
            raise ValidationError(
                f"class {label!r} has {len(members)} members, fewer than "
                f"{len(SPLIT_NAMES)} splits"
            )
        counts = _apportion(len(members), tuple(ratios))
        shuffled = [members[i] for i in rng.permutation(len(members))]
        start = 0
        for bucket, count in zip(split_indices, counts):
            bucket.extend(shuffled[start : start + count])
            start += count

    return tuple([data[i] for i in sorted(bucket)] for bucket in split_indices)
