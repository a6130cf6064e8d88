"""Uniform classifier interface over traditional and deep model families.

Families NB, SVM, LR, DT, RF, and GBT wrap scikit-learn estimators; DNN,
CNN, BiLSTM, and TransformerFT are small torch networks. Training is
deterministic per (spec, data, seed); prediction is always the argmax of
``predict_scores`` over the training label set.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from misinfo.errors import DataFormatError, ValidationError
from misinfo.features.vectorize import FeatureMatrix, SequenceBatch

TRADITIONAL_FAMILIES = ("NB", "SVM", "LR", "DT", "RF", "GBT")
DEEP_FAMILIES = ("DNN", "CNN", "BiLSTM", "TransformerFT")
FAMILIES = TRADITIONAL_FAMILIES + DEEP_FAMILIES

FEATURES = ("bow", "tfidf", "static-embed", "contextual-pooled", "contextual-sequence")
SEQUENCE_FAMILIES = ("CNN", "BiLSTM")

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ClassifierSpec:
    """Family, feature type, hyperparameters, and seed of one classifier."""

    family: str
    feature: str
    hyperparams: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}")
        if self.feature not in FEATURES:
            raise ValidationError(f"unknown feature type {self.feature!r}")
        if self.family == "NB" and self.feature != "bow":
            raise ValidationError("NB pairs only with the bow feature")
        if self.family in SEQUENCE_FAMILIES and self.feature != "contextual-sequence":
            raise ValidationError(f"{self.family} requires the contextual-sequence feature")
        if self.family == "TransformerFT" and self.feature != "contextual-pooled":
            raise ValidationError("TransformerFT requires the contextual-pooled feature")
        if self.family not in SEQUENCE_FAMILIES and self.feature == "contextual-sequence":
            raise ValidationError(f"{self.family} cannot consume sequence features")


@dataclass
class TrainedModel:
    """A trained classifier: spec, ordered label set, and learned state."""

    spec: ClassifierSpec
    label_set: tuple[str, ...]
    parameters: Any
    training_meta: dict[str, Any]


def _pooled_array(X) -> np.ndarray:
    if isinstance(X, FeatureMatrix):
        return X.values
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2:
        raise ValidationError(f"expected a 2-d feature array, got shape {arr.shape}")
    return arr


def _training_inputs(spec: ClassifierSpec, X):
    """Validate X against the spec's feature kind and return model inputs."""
    if spec.family in SEQUENCE_FAMILIES:
        if not isinstance(X, SequenceBatch):
            raise ValidationError(f"{spec.family} expects a SequenceBatch input")
        return X
    if isinstance(X, SequenceBatch):
        raise ValidationError(f"{spec.family} expects pooled features, got sequences")
    return _pooled_array(X)


def train(
    spec: ClassifierSpec,
    X,
    y,
    X_val=None,
    y_val=None,
    encoder_mode: str | None = None,
) -> TrainedModel:
    """Fit a classifier deterministically.

    ``X`` is a FeatureMatrix or 2-d array for pooled families and a
    SequenceBatch for CNN/BiLSTM. Single-class training data yields a
    constant predictor flagged in ``training_meta``. Deep families accept an
    optional validation set for early stopping.
    """
    if spec.family == "TransformerFT" and encoder_mode == "frozen":
        raise ValidationError("TransformerFT requires a finetunable encoder")
    data = _training_inputs(spec, X)
    y = list(y)
    n_rows = data.arrays.shape[0] if isinstance(data, SequenceBatch) else data.shape[0]
    if n_rows != len(y):
        raise ValidationError(f"{n_rows} feature rows for {len(y)} labels")
    if n_rows < 2:
        raise ValidationError("training requires at least 2 samples")

    label_set = tuple(sorted(set(y)))
    started = time.perf_counter()
    meta: dict[str, Any] = {"n_samples": n_rows}

    if len(label_set) == 1:
        parameters = None
        meta["constant"] = True
        meta["warning"] = f"single-class training data; always predicts {label_set[0]!r}"
    else:
        meta["constant"] = False
        if spec.family in TRADITIONAL_FAMILIES:
            from misinfo.models import _traditional

            parameters = _traditional.fit(spec, data, y, label_set)
        else:
            from misinfo.models import _deep

            parameters = _deep.fit(spec, data, y, label_set, X_val=X_val, y_val=y_val)
    meta["wall_time"] = time.perf_counter() - started
    return TrainedModel(spec=spec, label_set=label_set, parameters=parameters, training_meta=meta)


def predict_scores(model: TrainedModel, X) -> np.ndarray:
    """Per-class score rows over ``model.label_set``; finite everywhere."""
    data = _training_inputs(model.spec, X)
    n_rows = data.arrays.shape[0] if isinstance(data, SequenceBatch) else data.shape[0]
    if model.training_meta.get("constant"):
        return np.ones((n_rows, 1))
    scores = model.parameters.scores(data)
    if not np.all(np.isfinite(scores)):
        raise ValidationError("model produced non-finite scores")
    return scores


def predict(model: TrainedModel, X) -> list:
    """One label per row: the argmax of predict_scores (first index on ties)."""
    scores = predict_scores(model, X)
    return [model.label_set[i] for i in np.argmax(scores, axis=1)]


def save_model(model: TrainedModel, path: str | Path) -> None:
    """Persist to a directory: JSON manifest plus family-specific parameters."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    manifest = {
        "format_version": FORMAT_VERSION,
        "spec": {
            "family": model.spec.family,
            "feature": model.spec.feature,
            "hyperparams": model.spec.hyperparams,
            "seed": model.spec.seed,
        },
        "label_set": list(model.label_set),
        "training_meta": model.training_meta,
    }
    if model.parameters is not None:
        manifest["parameters_file"] = model.parameters.save(path)
    (path / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8"
    )


def load_model(path: str | Path) -> TrainedModel:
    """Load a model directory; predictions round-trip bit-identically."""
    path = Path(path)
    manifest_path = path / "manifest.json"
    if not manifest_path.exists():
        raise DataFormatError(f"model manifest not found: {manifest_path}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("format_version") != FORMAT_VERSION:
        raise DataFormatError(
            f"unsupported model format version {manifest.get('format_version')!r}"
        )
    spec = ClassifierSpec(**manifest["spec"])
    label_set = tuple(manifest["label_set"])
    parameters = None
    if "parameters_file" in manifest:
        if spec.family in TRADITIONAL_FAMILIES:
            from misinfo.models import _traditional

            parameters = _traditional.load(path / manifest["parameters_file"], label_set)
        else:
            from misinfo.models import _deep

            parameters = _deep.load(path / manifest["parameters_file"], spec, label_set)
    return TrainedModel(
        spec=spec,
        label_set=label_set,
        parameters=parameters,
        training_meta=manifest["training_meta"],
    )
