"""Annotation records, label adjudication, and agreement statistics.

Encodes the two-phase guideline: a relevance phase (language / topic /
verifiable-claim questions) and a truth phase (one four-way question).
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from misinfo.corpus import Tweet
from misinfo.errors import DataFormatError, ValidationError

FILTER_VALUES = ("relevant", "non-indonesia", "out-of-topic")
FACTUAL_CLAIM_VALUES = ("true", "not-sure", "false")
TRUTH_VALUES = ("true", "misinformation", "not-sure", "need-expert")

# Final adjudicated label universe.
GOLD_LABELS = (
    "irrelevant",
    "true",
    "misinformation",
    "not-sure",
    "no-consensus",
    "need-expert",
)

PHASES = ("relevance", "truth")

RELEVANCE_CSV_COLUMNS = (
    "tweet_url",
    "text",
    "urls",
    "date",
    "filter",
    "personal",
    "humor",
    "factual_claim",
)
TRUTH_CSV_COLUMNS = ("tweet_url", "text", "urls", "date", "truth")


@dataclass(frozen=True)
class RelevanceAnnotation:
    """One annotator's relevance-phase answers for one tweet.

    The claim questions (personal / humor / factual_claim) are answered only
    when the filter question passed as ``relevant``; they must be absent
    otherwise.
    """

    tweet_id: str
    annotator_id: str
    filter: str
    personal: bool | None = None
    humor: bool | None = None
    factual_claim: str | None = None

    def __post_init__(self):
        if self.filter not in FILTER_VALUES:
            raise ValidationError(f"unknown filter value {self.filter!r}")
        claim_fields = (self.personal, self.humor, self.factual_claim)
        if self.filter == "relevant":
            if any(v is None for v in claim_fields):
                raise ValidationError(
                    "personal, humor, and factual_claim are required when filter=relevant"
                )
            if self.factual_claim not in FACTUAL_CLAIM_VALUES:
                raise ValidationError(f"unknown factual_claim value {self.factual_claim!r}")
        elif any(v is not None for v in claim_fields):
            raise ValidationError(
                f"claim answers are not allowed when filter={self.filter!r}"
            )


@dataclass(frozen=True)
class TruthAnnotation:
    """One annotator's truth-phase verdict for one tweet."""

    tweet_id: str
    annotator_id: str
    truth: str

    def __post_init__(self):
        if self.truth not in TRUTH_VALUES:
            raise ValidationError(f"unknown truth value {self.truth!r}")


@dataclass(frozen=True)
class GoldLabel:
    """Adjudicated per-tweet label."""

    tweet_id: str
    label: str

    def __post_init__(self):
        if self.label not in GOLD_LABELS:
            raise ValidationError(f"unknown gold label {self.label!r}")


def derive_relevance(a: RelevanceAnnotation) -> str:
    """Collapse a relevance annotation to ``relevant`` or ``irrelevant``.

    A tweet counts as relevant only when it passed the filter question and
    carries a verifiable factual claim that is neither a personal experience
    nor humor. A not-sure factual claim maps to irrelevant here; the raw
    answer stays available in exports.
    """
    if (
        a.filter == "relevant"
        and a.factual_claim == "true"
        and a.personal is False
        and a.humor is False
    ):
        return "relevant"
    return "irrelevant"


def adjudicate(
    annotations: list[RelevanceAnnotation] | list[TruthAnnotation],
    phase: str,
) -> str:
    """Strict-majority vote over same-tweet annotations.

    Relevance-phase votes are the ``derive_relevance`` outcomes, so the
    verdict is ``relevant``, ``irrelevant``, or ``no-consensus``; truth-phase
    verdicts are the annotated truth values or ``no-consensus``. The result
    is invariant under permutation of the input.
    """
    if phase not in PHASES:
        raise ValidationError(f"unknown phase {phase!r}")
    if len(annotations) < 2:
        raise ValidationError("adjudication requires at least 2 annotations")
    tweet_ids = {a.tweet_id for a in annotations}
    if len(tweet_ids) != 1:
        raise ValidationError(f"annotations span multiple tweets: {sorted(tweet_ids)}")

    if phase == "relevance":
        if not all(isinstance(a, RelevanceAnnotation) for a in annotations):
            raise ValidationError("relevance adjudication got non-relevance records")
        votes = [derive_relevance(a) for a in annotations]
    else:
        if not all(isinstance(a, TruthAnnotation) for a in annotations):
            raise ValidationError("truth adjudication got non-truth records")
        votes = [a.truth for a in annotations]

    label, count = Counter(votes).most_common(1)[0]
    if count * 2 > len(votes):
        return label
    return "no-consensus"


def combine_verdicts(relevance_verdict: str, truth_verdict: str | None = None) -> str | None:
    """Final gold label from the two phase verdicts.

    Returns None when the tweet is still pending (adjudicated relevant but
    not yet truth-adjudicated).
    """
    if relevance_verdict == "irrelevant":
        return "irrelevant"
    if relevance_verdict == "no-consensus":
        return "no-consensus"
    if relevance_verdict != "relevant":
        raise ValidationError(f"unknown relevance verdict {relevance_verdict!r}")
    return truth_verdict


def cohen_kappa(labels_a: list, labels_b: list) -> float:
    """Chance-corrected agreement between two aligned label sequences.

    kappa = (p_o - p_e) / (1 - p_e), where p_o is the observed agreement
    rate and p_e the expected agreement from the annotators' marginal label
    frequencies. Perfect agreement with degenerate marginals (p_e = 1)
    returns 1.0 by convention.
    """
    if len(labels_a) != len(labels_b):
        raise ValidationError(
            f"label sequences differ in length: {len(labels_a)} vs {len(labels_b)}"
        )
    if not labels_a:
        raise ValidationError("cannot compute agreement on empty sequences")
    n = len(labels_a)
    p_o = sum(a == b for a, b in zip(labels_a, labels_b)) / n
    freq_a = Counter(labels_a)
    freq_b = Counter(labels_b)
    p_e = sum(freq_a[label] * freq_b.get(label, 0) for label in freq_a) / (n * n)
    if p_e == 1.0:
        return 1.0
    return (p_o - p_e) / (1.0 - p_e)


def contingency_table(labels_a: list, labels_b: list) -> tuple[list, list[list[int]]]:
    """Label universe (sorted) and the a-rows by b-columns count matrix."""
    if len(labels_a) != len(labels_b):
        raise ValidationError("label sequences differ in length")
    labels = sorted(set(labels_a) | set(labels_b))
    index = {label: i for i, label in enumerate(labels)}
    table = [[0] * len(labels) for _ in labels]
    for a, b in zip(labels_a, labels_b):
        table[index[a]][index[b]] += 1
    return labels, table


def round_half_up(value: Decimal, places: int = 2) -> float:
    return float(value.quantize(Decimal(10) ** -places, rounding=ROUND_HALF_UP))


def label_distribution(gold: list[GoldLabel]) -> list[tuple[str, int, float]]:
    """Rows of (label, count, percentage), ordered by descending count.

    Percentages are 100 * count / total, rounded half-up to 2 decimals.
    Count ties are ordered by label name.
    """
    if not gold:
        raise ValidationError("label distribution of an empty list")
    counts = Counter(g.label for g in gold)
    total = len(gold)
    rows = []
    for label, count in sorted(counts.items(), key=lambda item: (-item[1], item[0])):
        pct = round_half_up(Decimal(100 * count) / Decimal(total))
        rows.append((label, count, pct))
    return rows


def anonymized_tweet_url(tweet_id: str) -> str:
    """Tweet link that hides the author's handle."""
    return f"https://twitter.com/i/web/status/{tweet_id}"


def _cell(value) -> str:
    return "" if value is None else str(value).lower()


def _tweet_columns(tweet: Tweet) -> list[str]:
    return [
        anonymized_tweet_url(tweet.id),
        tweet.text,
        " ".join(tweet.urls),
        tweet.posted_at.isoformat() if tweet.posted_at else "",
    ]


def relevance_csv(rows: list[tuple[Tweet, RelevanceAnnotation]]) -> str:
    """Relevance-phase export with the guideline's exact column layout."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(RELEVANCE_CSV_COLUMNS)
    for tweet, ann in rows:
        writer.writerow(
            _tweet_columns(tweet)
            + [ann.filter, _cell(ann.personal), _cell(ann.humor), _cell(ann.factual_claim)]
        )
    return buffer.getvalue()


def truth_csv(rows: list[tuple[Tweet, TruthAnnotation]]) -> str:
    """Truth-phase export with the guideline's exact column layout."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(TRUTH_CSV_COLUMNS)
    for tweet, ann in rows:
        writer.writerow(_tweet_columns(tweet) + [ann.truth])
    return buffer.getvalue()


def write_relevance_csv(
    rows: list[tuple[Tweet, RelevanceAnnotation]], path: str | Path
) -> None:
    Path(path).write_text(relevance_csv(rows), encoding="utf-8", newline="")


def write_truth_csv(rows: list[tuple[Tweet, TruthAnnotation]], path: str | Path) -> None:
    Path(path).write_text(truth_csv(rows), encoding="utf-8", newline="")


def write_gold_csv(gold: list[GoldLabel], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tweet_id", "label"])
        for item in gold:
            writer.writerow([item.tweet_id, item.label])


def load_gold_csv(path: str | Path) -> list[GoldLabel]:
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"gold label file not found: {path}")
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"tweet_id", "label"}.issubset(reader.fieldnames):
            raise DataFormatError(f"{path}: expected header with columns tweet_id,label")
        return [GoldLabel(row["tweet_id"], row["label"]) for row in reader]
