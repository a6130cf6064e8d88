"""Classification metrics: accuracy, one-vs-rest precision/recall/F1,
confusion matrices, and the binary collapse used for error analysis."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from misinfo.annotation import round_half_up
from misinfo.errors import ValidationError


@dataclass(frozen=True)
class ClassMetrics:
    """One-vs-rest scores for a single class, as percentages."""

    precision: float
    recall: float
    f1: float
    support: int
    undefined: tuple[str, ...] = ()


@dataclass(frozen=True)
class MetricsReport:
    """Metrics of one experiment run.

    ``accuracy`` is over all classes; ``per_class`` holds one-vs-rest scores;
    ``confusion`` is the gold-by-predicted count matrix ordered by
    ``classes``; ``target_class`` marks the class of interest.
    """

    accuracy: float
    classes: tuple[str, ...]
    per_class: dict[str, ClassMetrics]
    confusion: np.ndarray
    target_class: str

    def __post_init__(self):
        total = int(self.confusion.sum())
        if total > 0:
            trace_acc = 100.0 * np.trace(self.confusion) / total
            if abs(trace_acc - self.accuracy) > 1e-9:
                raise ValidationError("accuracy does not match the confusion matrix trace")

    @property
    def target(self) -> ClassMetrics:
        return self.per_class[self.target_class]


def harmonic_f1(precision: float, recall: float) -> float:
    """F1 as the harmonic mean of precision and recall (0 when both are 0)."""
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def confusion_matrix(gold: list, pred: list, classes: tuple[str, ...]) -> np.ndarray:
    """Cell (i, j) counts items with gold=classes[i] predicted as classes[j]."""
    if len(gold) != len(pred):
        raise ValidationError(f"gold/pred length mismatch: {len(gold)} vs {len(pred)}")
    index = {label: i for i, label in enumerate(classes)}
    matrix = np.zeros((len(classes), len(classes)), dtype=int)
    for g, p in zip(gold, pred):
        if g not in index or p not in index:
            unknown = g if g not in index else p
            raise ValidationError(f"label {unknown!r} not in classes {classes}")
        matrix[index[g], index[p]] += 1
    return matrix


def compute_metrics(
    gold: list,
    pred: list,
    target: str,
    classes: tuple[str, ...] | None = None,
) -> MetricsReport:
    """Accuracy plus one-vs-rest precision/recall/F1 for every class.

    All values are percentages. Zero-denominator precision or recall is
    reported as 0.0 and flagged in ``ClassMetrics.undefined``.
    """
    if len(gold) != len(pred) or not gold:
        raise ValidationError("gold and pred must be equal-length and non-empty")
    if classes is None:
        classes = tuple(sorted(set(gold) | set(pred)))
    if target not in classes:
        raise ValidationError(f"target {target!r} not in label universe {classes}")

    matrix = confusion_matrix(gold, pred, classes)
    total = matrix.sum()
    accuracy = float(100.0 * np.trace(matrix) / total)

    per_class: dict[str, ClassMetrics] = {}
    for i, label in enumerate(classes):
        tp = int(matrix[i, i])
        fp = int(matrix[:, i].sum()) - tp
        fn = int(matrix[i, :].sum()) - tp
        undefined = []
        if tp + fp == 0:
            precision = 0.0
            undefined.append("precision")
        else:
            precision = 100.0 * tp / (tp + fp)
        if tp + fn == 0:
            recall = 0.0
            undefined.append("recall")
        else:
            recall = 100.0 * tp / (tp + fn)
        per_class[label] = ClassMetrics(
            precision=precision,
            recall=recall,
            f1=harmonic_f1(precision, recall),
            support=int(matrix[i, :].sum()),
            undefined=tuple(undefined),
        )
    return MetricsReport(
        accuracy=accuracy,
        classes=classes,
        per_class=per_class,
        confusion=matrix,
        target_class=target,
    )


def collapse_binary(cm3: np.ndarray, classes: tuple[str, ...]) -> np.ndarray:
    """Merge irrelevant and true into not-misinformation; keep misinformation.

    The output is ordered (not-misinformation, misinformation) and preserves
    the total count.
    """
    expected = {"irrelevant", "true", "misinformation"}
    if set(classes) != expected or cm3.shape != (3, 3):
        raise ValidationError(f"collapse expects a 3x3 matrix over {sorted(expected)}")
    mis = classes.index("misinformation")
    other = [i for i in range(3) if i != mis]
    out = np.zeros((2, 2), dtype=int)
    out[0, 0] = cm3[np.ix_(other, other)].sum()
    out[0, 1] = cm3[other, mis].sum()
    out[1, 0] = cm3[mis, other].sum()
    out[1, 1] = cm3[mis, mis]
    return out

BINARY_CLASSES = ("not-misinformation", "misinformation")


def report_as_dict(report: MetricsReport) -> dict:
    """JSON-ready mirror of a MetricsReport."""
    return {
        "accuracy": report.accuracy,
        "target_class": report.target_class,
        "classes": list(report.classes),
        "confusion": report.confusion.tolist(),
        "per_class": {
            label: {
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
                "support": m.support,
                "undefined": list(m.undefined),
            }
            for label, m in report.per_class.items()
        },
    }


def format_confusion(matrix: np.ndarray, classes: tuple[str, ...]) -> str:
    """Labeled text grid of a confusion matrix (rows gold, columns predicted)."""
    width = max(len(c) for c in classes) + 2
    width = max(width, 8)
    header = " " * width + "".join(f"{c:>{width}}" for c in classes)
    lines = [header]
    for i, label in enumerate(classes):
        cells = "".join(f"{int(v):>{width}}" for v in matrix[i])
        lines.append(f"{label:<{width}}" + cells)
    return "\n".join(lines)


def two_decimals(value: float) -> float:
    return round_half_up(Decimal(repr(float(value))))
