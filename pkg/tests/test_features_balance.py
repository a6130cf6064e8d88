import numpy as np
import pytest

from misinfo.errors import ValidationError
from misinfo.features.balance import balance, interpolate


def point_to_segment_distance(p, a, b):
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0:
        return float(np.linalg.norm(p - a))
    t = np.clip(float((p - a) @ ab) / denom, 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))


def two_class_data(n_major=100, n_minor=20, dim=4, seed=0):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(0, 1, (n_major, dim)), rng.normal(6, 1, (n_minor, dim))])
    y = np.array(["maj"] * n_major + ["min"] * n_minor)
    return X, y


class TestInterpolate:
    def test_midpoint(self):
        got = interpolate(np.array([0.0, 0.0]), np.array([2.0, 2.0]), 0.5)
        assert got.tolist() == [1.0, 1.0]

    def test_zero_lambda_is_seed_point(self):
        seed = np.array([3.0, -1.0])
        assert interpolate(seed, np.array([9.0, 9.0]), 0.0).tolist() == seed.tolist()


class TestBalanceChain:
    def test_configured_chain_counts(self):
        X, y = two_class_data()
        Xb, yb = balance(X, y, target_minority_ratio=1.0, k_neighbors=3, seed=1,
                         oversample_to=0.6)
        counts = {label: int((yb == label).sum()) for label in ("maj", "min")}
        assert counts == {"maj": 60, "min": 60}
        assert Xb.shape == (120, X.shape[1])

    def test_default_chain_counts(self):
        X, y = two_class_data()
        Xb, yb = balance(X, y, seed=3)
        assert int((yb == "min").sum()) == 50
        assert int((yb == "maj").sum()) == 50

    def test_minority_rows_preserved_verbatim(self):
        X, y = two_class_data()
        Xb, yb = balance(X, y, k_neighbors=3, seed=5, oversample_to=0.6)
        original_minority = X[y == "min"]
        kept = Xb[: len(yb) - 40][yb[: len(yb) - 40] == "min"]
        # the 20 original minority rows survive unchanged, in order
        minority_out = Xb[yb == "min"]
        assert np.array_equal(minority_out[:20], original_minority)

    def test_removed_rows_are_majority_only(self):
        X, y = two_class_data()
        Xb, yb = balance(X, y, k_neighbors=3, seed=5, oversample_to=0.6)
        surviving_major = Xb[yb == "maj"]
        original_major = {tuple(row) for row in X[y == "maj"]}
        for row in surviving_major:
            assert tuple(row) in original_major

    def test_synthetic_points_on_seed_neighbor_segments(self):
        X, y = two_class_data(seed=9)
        k = 4
        Xb, yb = balance(X, y, target_minority_ratio=1.0, k_neighbors=k, seed=2,
                         oversample_to=0.8)
        minority = X[y == "min"]
        n_synth = int((yb == "min").sum()) - len(minority)
        assert n_synth > 0
        synthetic = Xb[yb == "min"][len(minority):]

        # independent brute-force kNN among minority rows
        dist = np.linalg.norm(minority[:, None, :] - minority[None, :, :], axis=2)
        np.fill_diagonal(dist, np.inf)
        neighbor_idx = np.argsort(dist, axis=1)[:, :k]

        for point in synthetic:
            best = min(
                point_to_segment_distance(point, minority[i], minority[j])
                for i in range(len(minority))
                for j in neighbor_idx[i]
            )
            assert best <= 1e-9

    def test_deterministic(self):
        X, y = two_class_data()
        first = balance(X, y, k_neighbors=3, seed=7, oversample_to=0.6)
        second = balance(X, y, k_neighbors=3, seed=7, oversample_to=0.6)
        assert np.array_equal(first[0], second[0])
        assert np.array_equal(first[1], second[1])

    def test_minority_too_small_for_k(self):
        X, y = two_class_data(n_minor=4)
        with pytest.raises(ValidationError):
            balance(X, y, k_neighbors=5, seed=0)

    def test_single_class_rejected(self):
        X = np.zeros((5, 2))
        with pytest.raises(ValidationError):
            balance(X, np.array(["a"] * 5), k_neighbors=1, seed=0)

    def test_middle_class_untouched(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(40 + 25 + 10, 3))
        y = np.array(["maj"] * 40 + ["mid"] * 25 + ["min"] * 10)
        Xb, yb = balance(X, y, k_neighbors=2, seed=0, oversample_to=0.5)
        assert int((yb == "mid").sum()) == 25
        assert np.array_equal(Xb[yb == "mid"], X[y == "mid"])
