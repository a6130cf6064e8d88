"""scikit-learn realizations of the traditional classifier families."""

from __future__ import annotations

from pathlib import Path

import joblib
import numpy as np
from sklearn.ensemble import GradientBoostingClassifier, RandomForestClassifier
from sklearn.linear_model import LogisticRegression
from sklearn.naive_bayes import BernoulliNB
from sklearn.svm import LinearSVC
from sklearn.tree import DecisionTreeClassifier

from misinfo.errors import ValidationError

PARAMETERS_FILE = "params.joblib"


def _build_estimator(family: str, seed: int, hyperparams: dict):
    params = dict(hyperparams)
    if family == "NB":
        return BernoulliNB(**params)
    if family == "SVM":
        return LinearSVC(random_state=seed, **params)
    if family == "LR":
        params.setdefault("max_iter", 1000)
        return LogisticRegression(random_state=seed, **params)
    if family == "DT":
        return DecisionTreeClassifier(random_state=seed, **params)
    if family == "RF":
        params.setdefault("n_jobs", 1)
        return RandomForestClassifier(random_state=seed, **params)
    if family == "GBT":
        return GradientBoostingClassifier(random_state=seed, **params)
    raise ValidationError(f"not a traditional family: {family!r}")


class SklearnPredictor:
    """Wraps a fitted estimator; emits score rows aligned to the label set."""

    def __init__(self, estimator, label_set: tuple[str, ...]):
        self.estimator = estimator
        self.label_set = label_set
        # estimator.classes_ is sorted, as is label_set, but map explicitly
        self._column_of = {cls: i for i, cls in enumerate(estimator.classes_)}

    def scores(self, X: np.ndarray) -> np.ndarray:
        if X.shape[0] == 0:
            return np.zeros((0, len(self.label_set)))
        if hasattr(self.estimator, "predict_proba"):
            raw = self.estimator.predict_proba(X)
        else:
            # margin scores (SVM); binary decision_function is one column
            raw = self.estimator.decision_function(X)
            if raw.ndim == 1:
                raw = np.column_stack([-raw, raw])
        out = np.zeros((X.shape[0], len(self.label_set)))
        for col, label in enumerate(self.label_set):
            out[:, col] = raw[:, self._column_of[label]]
        return out

    def save(self, model_dir: Path) -> str:
        joblib.dump(self.estimator, model_dir / PARAMETERS_FILE)
        return PARAMETERS_FILE


def fit(spec, X: np.ndarray, y: list, label_set: tuple[str, ...]) -> SklearnPredictor:
    estimator = _build_estimator(spec.family, spec.seed, spec.hyperparams)
    estimator.fit(X, y)
    return SklearnPredictor(estimator, label_set)


def load(parameters_path: Path, label_set: tuple[str, ...]) -> SklearnPredictor:
    return SklearnPredictor(joblib.load(parameters_path), label_set)
