import numpy as np
import pytest

from misinfo.errors import DataFormatError, ValidationError
from misinfo.features.text import TokenizedDoc
from misinfo.features.vectorize import (
    FeatureMatrix,
    bow_binary,
    cache_path,
    embed_mean,
    fit_vocabulary,
    load_embedding_table,
    load_matrix,
    save_matrix,
    tfidf,
)


def doc(*tokens, id="d"):
    return TokenizedDoc(id=id, tokens=tuple(tokens))


class TestVocabulary:
    def test_counts_and_order(self):
        vocab = fit_vocabulary([doc("a", "b", id="1"), doc("a", id="2")], min_df=1)
        assert vocab.index == {"a": 0, "b": 1}
        assert vocab.doc_freq == {"a": 2, "b": 1}
        assert vocab.n_docs == 2

    def test_min_df_filters(self):
        vocab = fit_vocabulary([doc("a", "b", id="1"), doc("a", id="2")], min_df=2)
        assert vocab.index == {"a": 0}

    def test_min_df_too_high(self):
        with pytest.raises(ValidationError):
            fit_vocabulary([doc("a", "b", id="1"), doc("a", id="2")], min_df=3)

    def test_lexicographic_indexing(self):
        vocab = fit_vocabulary([doc("zebra", "apel", "m", id="1")])
        assert list(vocab.index) == ["apel", "m", "zebra"]


class TestBowBinary:
    def test_presence_only(self):
        vocab = fit_vocabulary([doc("covid", "vaksin", "masker", id="f")])
        matrix = bow_binary([doc("covid", "covid", "vaksin", id="1")], vocab)
        assert matrix.values.tolist() == [[1.0, 0.0, 1.0]]

    def test_empty_doc_zero_row(self):
        vocab = fit_vocabulary([doc("a", id="f")])
        assert bow_binary([doc(id="1")], vocab).values.tolist() == [[0.0]]

    def test_oov_only_zero_row(self):
        vocab = fit_vocabulary([doc("a", id="f")])
        assert bow_binary([doc("x", "y", id="1")], vocab).values.tolist() == [[0.0]]

    def test_values_binary(self):
        rng = np.random.default_rng(0)
        tokens = ["a", "b", "c", "d", "e"]
        docs = [
            doc(*rng.choice(tokens, size=int(rng.integers(0, 8))), id=str(i))
            for i in range(20)
        ]
        vocab = fit_vocabulary([doc(*tokens, id="f")])
        values = bow_binary(docs, vocab).values
        assert set(np.unique(values)).issubset({0.0, 1.0})


# Frozen oracle: direct hand evaluation of tf * (ln((1+N)/(1+df)) + 1) with
# L2 row normalization on the three documents below.
TFIDF_ORACLE = [
    [0.835591541945, 0.549351231026, 0.0, 0.0, 0.0],
    [0.707106781187, 0.0, 0.707106781187, 0.0, 0.0],
    [0.0, 0.0, 0.473629601033, 0.622766007833, 0.622766007833],
]


class TestTfidf:
    def fixture_docs(self):
        return [
            doc("covid", "covid", "hoaks", id="1"),
            doc("covid", "masker", id="2"),
            doc("vaksin", "masker", "sehat", id="3"),
        ]

    def test_matches_hand_computed_matrix(self):
        docs = self.fixture_docs()
        vocab = fit_vocabulary(docs)
        assert list(vocab.index) == ["covid", "hoaks", "masker", "sehat", "vaksin"]
        matrix = tfidf(docs, vocab)
        assert np.allclose(matrix.values, TFIDF_ORACLE, atol=1e-9)

    def test_single_token_doc_normalizes_to_one(self):
        docs = [doc("a", id="1"), doc("a", id="2")]
        vocab = fit_vocabulary(docs)
        matrix = tfidf(docs, vocab)
        assert np.allclose(matrix.values, [[1.0], [1.0]])

    def test_empty_doc_zero_row(self):
        docs = self.fixture_docs()
        vocab = fit_vocabulary(docs)
        matrix = tfidf([doc(id="e")], vocab)
        assert np.all(matrix.values == 0)

    def test_rows_unit_norm_or_zero(self):
        rng = np.random.default_rng(1)
        tokens = ["a", "b", "c", "d", "e", "f"]
        docs = [
            doc(*rng.choice(tokens, size=int(rng.integers(0, 10))), id=str(i))
            for i in range(40)
        ]
        vocab = fit_vocabulary([doc(*tokens, id="f")])
        norms = np.linalg.norm(tfidf(docs, vocab).values, axis=1)
        for row, norm in enumerate(norms):
            assert norm == pytest.approx(1.0, abs=1e-9) or norm == 0.0


class TestEmbedMean:
    TABLE = {"x": np.array([1.0, 0.0]), "y": np.array([0.0, 1.0])}

    def test_mean(self):
        matrix = embed_mean([doc("x", "y", id="1")], self.TABLE)
        assert matrix.values.tolist() == [[0.5, 0.5]]

    def test_all_oov_zero_vector(self):
        matrix = embed_mean([doc("q", "r", id="1")], self.TABLE)
        assert matrix.values.tolist() == [[0.0, 0.0]]

    def test_single_token_identity(self):
        matrix = embed_mean([doc("y", id="1")], self.TABLE)
        assert matrix.values.tolist() == [[0.0, 1.0]]

    def test_inconsistent_dims_rejected(self):
        table = {"x": np.array([1.0]), "y": np.array([0.0, 1.0])}
        with pytest.raises(ValidationError):
            embed_mean([doc("x", id="1")], table)

    def test_mean_within_coordinate_bounds(self):
        rng = np.random.default_rng(3)
        table = {f"t{i}": rng.normal(size=4) for i in range(12)}
        for trial in range(25):
            tokens = [f"t{i}" for i in rng.integers(0, 12, size=int(rng.integers(1, 8)))]
            row = embed_mean([doc(*tokens, id="1")], table).values[0]
            vectors = np.array([table[t] for t in tokens])
            assert np.all(row >= vectors.min(axis=0) - 1e-12)
            assert np.all(row <= vectors.max(axis=0) + 1e-12)


class TestEmbeddingTableFile:
    def test_load(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("covid 1.0 2.0\nvaksin -0.5 0.25\n")
        table = load_embedding_table(path)
        assert table["vaksin"].tolist() == [-0.5, 0.25]

    def test_dim_mismatch(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("a 1.0 2.0\nb 3.0\n")
        with pytest.raises(DataFormatError, match=":2"):
            load_embedding_table(path)


class TestMatrixInvariantsAndIo:
    def test_row_alignment_enforced(self):
        with pytest.raises(ValidationError):
            FeatureMatrix(("a",), np.zeros((2, 2)))

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError):
            FeatureMatrix(("a",), np.array([[np.nan, 0.0]]))

    def test_save_load_round_trip(self, tmp_path):
        matrix = FeatureMatrix(("a", "b"), np.arange(6, dtype=float).reshape(2, 3), "tfidf")
        path = tmp_path / "m.npz"
        save_matrix(matrix, path)
        loaded = load_matrix(path)
        assert loaded.ids == matrix.ids
        assert loaded.feature == "tfidf"
        assert np.array_equal(loaded.values, matrix.values)

    def test_cache_key_stable_and_feature_scoped(self, tmp_path):
        docs = [doc("a", "b", id="1")]
        first = cache_path(tmp_path, docs, "tfidf")
        assert first == cache_path(tmp_path, docs, "tfidf")
        assert first != cache_path(tmp_path, docs, "bow")
        assert first != cache_path(tmp_path, [doc("a", "c", id="1")], "tfidf")
