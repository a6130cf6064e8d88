"""Class rebalancing: synthetic minority oversampling chained with random
majority undersampling.

Phase 1 synthesizes minority points on segments between a minority sample
and one of its k nearest minority neighbors (Euclidean); phase 2 removes
random majority points until the minority:majority ratio reaches the target.
Only the rarest and the most frequent class are touched; any middle classes
pass through unchanged.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from misinfo.errors import ValidationError


@dataclass(frozen=True)
class BalanceConfig:
    """Chain settings.

    ``oversample_to`` is the minority size after synthesis, as a fraction of
    the majority count; ``target_minority_ratio`` is the final
    minority:majority ratio reached by undersampling.
    """

    target_minority_ratio: float = 1.0
    k_neighbors: int = 5
    oversample_to: float = 0.5

    def __post_init__(self):
        if not 0 < self.target_minority_ratio <= 1:
            raise ValidationError("target_minority_ratio must be in (0, 1]")
        if self.k_neighbors < 1:
            raise ValidationError("k_neighbors must be >= 1")
        if not 0 < self.oversample_to <= 1:
            raise ValidationError("oversample_to must be in (0, 1]")


def interpolate(x_seed: np.ndarray, x_neighbor: np.ndarray, lam: float) -> np.ndarray:
    """Point at fraction lam along the seed-to-neighbor segment."""
    return x_seed + lam * (x_neighbor - x_seed)


def _nearest_neighbors(points: np.ndarray, k: int) -> np.ndarray:
    """Indices of each row's k nearest other rows (stable order on ties)."""
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    np.fill_diagonal(dist, np.inf)
    return np.argsort(dist, axis=1, kind="stable")[:, :k]


def balance(
    X: np.ndarray,
    y,
    target_minority_ratio: float = 1.0,
    k_neighbors: int = 5,
    seed: int = 0,
    oversample_to: float = 0.5,
) -> tuple[np.ndarray, np.ndarray]:
    """Run the oversample-then-undersample chain on a feature matrix.

    Original minority rows are preserved verbatim; removed rows are a subset
    of majority rows; synthetic rows are appended after the surviving
    originals. Deterministic per seed.
    """
    config = BalanceConfig(target_minority_ratio, k_neighbors, oversample_to)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.shape[0] != y.shape[0]:
        raise ValidationError("X and y row counts differ")

    counts = Counter(y.tolist())
    if len(counts) < 2:
        raise ValidationError("balancing requires at least two classes")
    ordered = sorted(counts.items(), key=lambda item: (item[1], str(item[0])))
    minority_label, n_minority = ordered[0]
    majority_label, n_majority = ordered[-1]
    if n_minority < config.k_neighbors + 1:
        raise ValidationError(
            f"minority class {minority_label!r} has {n_minority} samples; "
            f"needs at least k_neighbors + 1 = {config.k_neighbors + 1}"
        )

    rng = np.random.default_rng(seed)
    minority_idx = np.flatnonzero(y == minority_label)
    majority_idx = np.flatnonzero(y == majority_label)

    # phase 1: synthesize minority points up to the configured fraction of
    # the majority count
    minority_target = int(config.oversample_to * n_majority + 0.5)
    n_new = max(0, minority_target - n_minority)
    synthetic = np.empty((n_new, X.shape[1]))
    if n_new > 0:
        neighbors = _nearest_neighbors(X[minority_idx], config.k_neighbors)
        seeds = rng.integers(0, n_minority, size=n_new)
        picks = rng.integers(0, neighbors.shape[1], size=n_new)
        lams = rng.uniform(0.0, 1.0, size=n_new)
        for row, (i, j, lam) in enumerate(zip(seeds, picks, lams)):
            x_seed = X[minority_idx[i]]
            x_neighbor = X[minority_idx[neighbors[i, j]]]
            synthetic[row] = interpolate(x_seed, x_neighbor, lam)

    # phase 2: drop random majority rows until the ratio target holds
    minority_final = n_minority + n_new
    majority_target = min(n_majority, int(minority_final / config.target_minority_ratio + 0.5))
    removed: set[int] = set()
    if majority_target < n_majority:
        drop = rng.choice(n_majority, size=n_majority - majority_target, replace=False)
        removed = {int(majority_idx[i]) for i in drop}

    keep_rows = [i for i in range(X.shape[0]) if i not in removed]
    X_out = np.concatenate([X[keep_rows], synthetic]) if n_new else X[keep_rows]
    y_out = np.concatenate([y[keep_rows], np.full(n_new, minority_label, dtype=y.dtype)])
    return X_out, y_out
