"""Experiment orchestration: single 3-class runs, the two-stage cascade,
stratified cross-validation, and paired significance testing."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml
from scipy import stats
from sklearn.model_selection import StratifiedKFold

from misinfo import models
from misinfo.corpus import FINAL_LABELS, LabeledTweet, load_labeled
from misinfo.errors import DataFormatError, ValidationError
from misinfo.features.balance import BalanceConfig, balance
from misinfo.features.encoders import FakeHashEncoder, contextual_encode, get_encoder
from misinfo.features.text import TokenizedDoc, preprocess
from misinfo.features.vectorize import (
    bow_binary,
    embed_mean,
    fit_vocabulary,
    load_embedding_table,
    tfidf,
)
from misinfo.metrics import MetricsReport, compute_metrics, two_decimals
from misinfo.models import ClassifierSpec

TARGET_CLASS = "misinformation"
RELEVANT_LABELS = ("true", "misinformation")


class Featurizer:
    """Fits feature resources on training documents, then transforms any set.

    Vocabulary-based features are fitted on the training fold only, so no
    document statistics leak across splits.
    """

    def __init__(
        self,
        feature: str,
        min_df: int = 1,
        embedding_table: dict | None = None,
        encoder: FakeHashEncoder | None = None,
    ):
        if feature not in models.FEATURES:
            raise ValidationError(f"unknown feature type {feature!r}")
        self.feature = feature
        self.min_df = min_df
        self.embedding_table = embedding_table
        self.encoder = encoder
        self.vocab = None
        if feature == "static-embed" and embedding_table is None:
            raise ValidationError("static-embed features need an embedding table")
        if feature.startswith("contextual") and encoder is None:
            raise ValidationError(f"{feature} features need an encoder")

    def fit(self, docs: list[TokenizedDoc]) -> "Featurizer":
        if self.feature in ("bow", "tfidf"):
            self.vocab = fit_vocabulary(docs, min_df=self.min_df)
        return self

    def transform(self, docs: list[TokenizedDoc]):
        if self.feature == "bow":
            return bow_binary(docs, self.vocab)
        if self.feature == "tfidf":
            return tfidf(docs, self.vocab)
        if self.feature == "static-embed":
            return embed_mean(docs, self.embedding_table)
        pooled, sequences = contextual_encode(docs, self.encoder)
        return pooled if self.feature == "contextual-pooled" else sequences

    @property
    def encoder_mode(self) -> str | None:
        return self.encoder.handle.mode if self.encoder is not None else None


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment run needs, loadable from a YAML file."""

    mode: str
    specs: tuple[ClassifierSpec, ...]
    split_paths: dict[str, str]
    seed: int = 0
    name: str = ""
    balance_config: BalanceConfig | None = None
    min_df: int = 1
    encoder_name: str | None = None
    encoder_max_tokens: int = 128
    encoder_mode: str = "frozen"
    embedding_table_path: str | None = None

    def __post_init__(self):
        if self.mode not in ("single", "two-stage"):
            raise ValidationError(f"unknown experiment mode {self.mode!r}")
        expected = 1 if self.mode == "single" else 2
        if len(self.specs) != expected:
            raise ValidationError(
                f"{self.mode} mode requires exactly {expected} classifier spec(s)"
            )
        missing = {"train", "val", "test"} - set(self.split_paths)
        if missing:
            raise ValidationError(f"split paths missing: {sorted(missing)}")


def _spec_from_mapping(raw: dict, seed: int) -> ClassifierSpec:
    try:
        return ClassifierSpec(
            family=raw["family"],
            feature=raw["feature"],
            hyperparams=raw.get("hyperparams", {}),
            seed=raw.get("seed", seed),
        )
    except KeyError as exc:
        raise DataFormatError(f"classifier spec missing key: {exc}") from exc


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"experiment config not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise DataFormatError(f"{path}: invalid config: {exc}") from exc
    if not isinstance(raw, dict):
        raise DataFormatError(f"{path}: config must be a mapping")

    mode = raw.get("mode", "single")
    seed = raw.get("seed", 0)
    if mode == "single":
        if "model" not in raw:
            raise DataFormatError(f"{path}: single mode needs a 'model' entry")
        specs = (_spec_from_mapping(raw["model"], seed),)
    else:
        try:
            specs = (
                _spec_from_mapping(raw["relevance_model"], seed),
                _spec_from_mapping(raw["misinformation_model"], seed),
            )
        except KeyError as exc:
            raise DataFormatError(
                f"{path}: two-stage mode needs 'relevance_model' and "
                f"'misinformation_model' entries ({exc})"
            ) from exc

    balance_raw = raw.get("balance")
    balance_config = BalanceConfig(**balance_raw) if balance_raw else None
    encoder_raw = raw.get("encoder") or {}
    return ExperimentConfig(
        mode=mode,
        specs=specs,
        split_paths={k: str(v) for k, v in raw.get("splits", {}).items()},
        seed=seed,
        name=raw.get("name", ""),
        balance_config=balance_config,
        min_df=raw.get("vocab", {}).get("min_df", 1),
        encoder_name=encoder_raw.get("name"),
        encoder_max_tokens=encoder_raw.get("max_tokens", 128),
        encoder_mode=encoder_raw.get("mode", "frozen"),
        embedding_table_path=raw.get("embedding_table"),
    )


def build_featurizer(config: ExperimentConfig, feature: str) -> Featurizer:
    table = None
    encoder = None
    if feature == "static-embed":
        if config.embedding_table_path is None:
            raise ValidationError("config needs embedding_table for static-embed features")
        table = load_embedding_table(config.embedding_table_path)
    if feature.startswith("contextual"):
        if config.encoder_name is None:
            raise ValidationError("config needs an encoder for contextual features")
        encoder = get_encoder(
            config.encoder_name,
            max_tokens=config.encoder_max_tokens,
            mode=config.encoder_mode,
        )
    return Featurizer(
        feature, min_df=config.min_df, embedding_table=table, encoder=encoder
    )


def _docs(data: list[LabeledTweet]) -> list[TokenizedDoc]:
    return [preprocess(item.tweet.text, doc_id=item.tweet.id) for item in data]


def _labels(data: list[LabeledTweet]) -> list[str]:
    return [item.label for item in data]


def _maybe_balance(spec: ClassifierSpec, X, y, config: BalanceConfig | None, seed: int):
    """Apply the SMOTE chain for traditional families only (deep families
    use class weights in the loss instead)."""
    if config is None or spec.family not in models.TRADITIONAL_FAMILIES:
        return X, y
    values = X.values if hasattr(X, "values") else np.asarray(X)
    X_out, y_out = balance(
        values,
        y,
        target_minority_ratio=config.target_minority_ratio,
        k_neighbors=config.k_neighbors,
        seed=seed,
        oversample_to=config.oversample_to,
    )
    return X_out, list(y_out)


def _train_stage(
    spec: ClassifierSpec,
    featurizer: Featurizer,
    train_docs,
    y_train,
    val_docs,
    y_val,
    balance_config: BalanceConfig | None,
    seed: int,
) -> models.TrainedModel:
    featurizer.fit(train_docs)
    X_train = featurizer.transform(train_docs)
    X_val = featurizer.transform(val_docs) if val_docs else None
    X_train, y_train = _maybe_balance(spec, X_train, y_train, balance_config, seed)
    return models.train(
        spec,
        X_train,
        y_train,
        X_val=X_val,
        y_val=y_val if val_docs else None,
        encoder_mode=featurizer.encoder_mode,
    )


@dataclass(frozen=True)
class RunResult:
    """Metrics plus the raw predictions backing them."""

    name: str
    report: MetricsReport
    gold: tuple[str, ...]
    predicted: tuple[str, ...]
    stage1_predicted: tuple[str, ...] | None = None


def _load_splits(config: ExperimentConfig):
    return tuple(load_labeled(config.split_paths[name]) for name in ("train", "val", "test"))


def fit_single(config: ExperimentConfig) -> tuple[models.TrainedModel, Featurizer]:
    """Train the single-mode classifier on the configured train/val splits."""
    train_set, val_set, _ = _load_splits(config)
    spec = config.specs[0]
    featurizer = build_featurizer(config, spec.feature)
    model = _train_stage(
        spec,
        featurizer,
        _docs(train_set),
        _labels(train_set),
        _docs(val_set),
        _labels(val_set),
        config.balance_config,
        config.seed,
    )
    return model, featurizer


def run_single(config: ExperimentConfig) -> RunResult:
    """Train one 3-class classifier on the train split and report on test."""
    spec = config.specs[0]
    model, featurizer = fit_single(config)
    test_set = load_labeled(config.split_paths["test"])
    gold = _labels(test_set)
    predicted = models.predict(model, featurizer.transform(_docs(test_set)))
    report = compute_metrics(gold, predicted, TARGET_CLASS, classes=FINAL_LABELS)
    name = config.name or f"{spec.family}+{spec.feature}"
    return RunResult(name, report, tuple(gold), tuple(predicted))


def to_relevance_label(label: str) -> str:
    return "relevant" if label in RELEVANT_LABELS else "irrelevant"


def run_two_stage(config: ExperimentConfig) -> RunResult:
    """Relevance gate followed by a truth classifier.

    Stage 1 learns relevant-vs-irrelevant over the full training split
    (relevant = true or misinformation). Stage 2 learns true-vs-misinformation
    on only those training tweets. At inference a stage-1 irrelevant verdict
    is final; everything else receives stage 2's verdict.
    """
    train_set, val_set, test_set = _load_splits(config)
    spec1, spec2 = config.specs

    featurizer1 = build_featurizer(config, spec1.feature)
    stage1 = _train_stage(
        spec1,
        featurizer1,
        _docs(train_set),
        [to_relevance_label(item.label) for item in train_set],
        _docs(val_set),
        [to_relevance_label(item.label) for item in val_set],
        config.balance_config,
        config.seed,
    )

    train2 = [item for item in train_set if item.label in RELEVANT_LABELS]
    val2 = [item for item in val_set if item.label in RELEVANT_LABELS]
    featurizer2 = build_featurizer(config, spec2.feature)
    stage2 = _train_stage(
        spec2,
        featurizer2,
        _docs(train2),
        _labels(train2),
        _docs(val2),
        _labels(val2),
        config.balance_config,
        config.seed,
    )

    test_docs = _docs(test_set)
    gold = _labels(test_set)
    stage1_pred = models.predict(stage1, featurizer1.transform(test_docs))

    final = list(stage1_pred)
    forwarded = [i for i, verdict in enumerate(stage1_pred) if verdict == "relevant"]
    if forwarded:
        stage2_pred = models.predict(
            stage2, featurizer2.transform([test_docs[i] for i in forwarded])
        )
        for i, verdict in zip(forwarded, stage2_pred):
            final[i] = verdict
    for verdict, label in zip(stage1_pred, final):
        assert (verdict == "irrelevant") == (label == "irrelevant"), "cascade broke"
    report = compute_metrics(gold, final, TARGET_CLASS, classes=FINAL_LABELS)
    name = config.name or f"{spec1.family}>{spec2.family}+{spec2.feature}"
    return RunResult(name, report, tuple(gold), tuple(final), tuple(stage1_pred))


def kfold_scores(
    spec: ClassifierSpec,
    data: list[LabeledTweet],
    k: int,
    seed: int,
    target: str = TARGET_CLASS,
    balance_config: BalanceConfig | None = None,
    featurizer_factory=None,
) -> list[float]:
    """Target-class F1 (percent) for each of k stratified folds.

    Feature fitting and balancing happen inside each training fold only.
    ``featurizer_factory`` builds a fresh Featurizer per fold and defaults to
    plain vocabulary features.
    """
    if k < 2:
        raise ValidationError("k must be >= 2")
    labels = _labels(data)
    for label in sorted(set(labels)):
        members = sum(1 for v in labels if v == label)
        if members < k:
            raise ValidationError(f"class {label!r} has {members} members, fewer than k={k}")
    if featurizer_factory is None:
        featurizer_factory = lambda: Featurizer(spec.feature)

    docs = _docs(data)
    y = np.array(labels)
    folds = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
    scores = []
    for train_idx, test_idx in folds.split(np.zeros(len(y)), y):
        featurizer = featurizer_factory().fit([docs[i] for i in train_idx])
        X_train = featurizer.transform([docs[i] for i in train_idx])
        y_train = [labels[i] for i in train_idx]
        X_train, y_train = _maybe_balance(spec, X_train, y_train, balance_config, seed)
        model = models.train(spec, X_train, y_train, encoder_mode=featurizer.encoder_mode)
        predicted = models.predict(model, featurizer.transform([docs[i] for i in test_idx]))
        gold = [labels[i] for i in test_idx]
        scores.append(compute_metrics(gold, predicted, target).target.f1)
    return scores


@dataclass(frozen=True)
class TTestResult:
    t: float
    p: float
    significant: bool


def paired_ttest(sample_a, sample_b, alpha: float = 0.05, paired: bool = True) -> TTestResult:
    """Two-sided t test on paired samples (H0: equal means).

    All-zero differences return the exact-tie result (t=0, p=1); any other
    zero-variance differences are an error. ``paired=False`` switches to the
    independent-samples test for sensitivity checks.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError("samples must be equal-length 1-d sequences")
    if a.shape[0] < 2:
        raise ValidationError("need at least 2 paired observations")
    if paired:
        diffs = a - b
        if np.all(diffs == 0):
            return TTestResult(t=0.0, p=1.0, significant=False)
        if np.var(diffs) == 0:
            raise ValidationError("differences have zero variance; t is undefined")
        t, p = stats.ttest_rel(a, b)
    else:
        t, p = stats.ttest_ind(a, b)
    return TTestResult(t=float(t), p=float(p), significant=bool(p < alpha))


def experiment_report(reports: list[tuple[str, MetricsReport]]) -> list[dict]:
    """Leaderboard rows sorted by target F1 descending, names breaking ties.

    Values are rounded half-up to 2 decimals.
    """
    if not reports:
        raise ValidationError("experiment_report needs at least one entry")
    rows = []
    for name, report in reports:
        target = report.target
        rows.append(
            {
                "name": name,
                "accuracy": two_decimals(report.accuracy),
                "precision": two_decimals(target.precision),
                "recall": two_decimals(target.recall),
                "f1": two_decimals(target.f1),
            }
        )
    return sorted(rows, key=lambda row: (-row["f1"], row["name"]))


def format_leaderboard(rows: list[dict]) -> str:
    name_width = max(len(row["name"]) for row in rows)
    name_width = max(name_width, len("model"))
    header = f"{'model':<{name_width}}  {'Acc.':>7}  {'Prec.':>7}  {'Rec.':>7}  {'F1':>7}"
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row['name']:<{name_width}}  {row['accuracy']:>7.2f}  "
            f"{row['precision']:>7.2f}  {row['recall']:>7.2f}  {row['f1']:>7.2f}"
        )
    return "\n".join(lines)
