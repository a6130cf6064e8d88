"""Document vectorizers: binary bag-of-words, TF-IDF, mean static embeddings."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from misinfo.errors import DataFormatError, ValidationError
from misinfo.features.text import TokenizedDoc


@dataclass(frozen=True)
class Vocabulary:
    """Token index with the document frequencies it was fitted on."""

    index: dict[str, int]
    doc_freq: dict[str, int]
    n_docs: int

    def __len__(self) -> int:
        return len(self.index)


@dataclass(frozen=True)
class FeatureMatrix:
    """Dense document-by-dimension matrix, row-aligned to document ids."""

    ids: tuple[str, ...]
    values: np.ndarray
    feature: str = ""

    def __post_init__(self):
        if self.values.ndim != 2:
            raise ValidationError("feature matrix must be 2-dimensional")
        if len(self.ids) != self.values.shape[0]:
            raise ValidationError(
                f"{len(self.ids)} ids for {self.values.shape[0]} matrix rows"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("feature matrix contains non-finite values")

    @property
    def n_dims(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class SequenceBatch:
    """Per-document token vectors padded to a fixed length.

    ``arrays`` has shape (n_docs, max_tokens, dim); ``lengths`` holds the
    unpadded token counts (capped at max_tokens).
    """

    ids: tuple[str, ...]
    arrays: np.ndarray
    lengths: tuple[int, ...]

    def __post_init__(self):
        if self.arrays.ndim != 3:
            raise ValidationError("sequence batch must be 3-dimensional")
        if not (len(self.ids) == self.arrays.shape[0] == len(self.lengths)):
            raise ValidationError("sequence batch ids/arrays/lengths misaligned")


def fit_vocabulary(docs: list[TokenizedDoc], min_df: int = 1) -> Vocabulary:
    """Index tokens with document frequency >= min_df, in lexicographic order."""
    if not docs:
        raise ValidationError("cannot fit a vocabulary on an empty document list")
    if min_df < 1:
        raise ValidationError("min_df must be >= 1")
    doc_freq: dict[str, int] = {}
    for doc in docs:
        for token in set(doc.tokens):
            doc_freq[token] = doc_freq.get(token, 0) + 1
    kept = sorted(t for t, df in doc_freq.items() if df >= min_df)
    if not kept:
        raise ValidationError(f"no token reaches document frequency {min_df}")
    return Vocabulary(
        index={t: i for i, t in enumerate(kept)},
        doc_freq={t: doc_freq[t] for t in kept},
        n_docs=len(docs),
    )


def bow_binary(docs: list[TokenizedDoc], vocab: Vocabulary) -> FeatureMatrix:
    """Binary token-presence matrix; out-of-vocabulary tokens are ignored."""
    if len(vocab) == 0:
        raise ValidationError("vocabulary is empty")
    values = np.zeros((len(docs), len(vocab)))
    for row, doc in enumerate(docs):
        for token in doc.tokens:
            col = vocab.index.get(token)
            if col is not None:
                values[row, col] = 1.0
    return FeatureMatrix(tuple(d.id for d in docs), values, feature="bow")


def tfidf(docs: list[TokenizedDoc], vocab: Vocabulary) -> FeatureMatrix:
    """TF-IDF matrix with smoothed idf and L2-normalized rows.

    Cell value before normalization is tf(t, d) * (ln((1 + N) / (1 + df(t))) + 1)
    with raw term counts for tf. Documents with no in-vocabulary token keep a
    zero row (normalization skipped).
    """
    if len(vocab) == 0:
        raise ValidationError("vocabulary is empty")
    idf = np.zeros(len(vocab))
    for token, col in vocab.index.items():
        idf[col] = math.log((1 + vocab.n_docs) / (1 + vocab.doc_freq[token])) + 1.0
    values = np.zeros((len(docs), len(vocab)))
    for row, doc in enumerate(docs):
        for token in doc.tokens:
            col = vocab.index.get(token)
            if col is not None:
                values[row, col] += 1.0
        norm = 0.0
        if values[row].any():
            values[row] *= idf
            norm = np.linalg.norm(values[row])
        if norm > 0:
            values[row] /= norm
    return FeatureMatrix(tuple(d.id for d in docs), values, feature="tfidf")


def embed_mean(docs: list[TokenizedDoc], table: dict[str, np.ndarray]) -> FeatureMatrix:
    """Arithmetic mean of each document's in-table token vectors.

    Documents whose tokens are all out of table (or empty documents) get a
    zero vector.
    """
    if not table:
        raise ValidationError("embedding table is empty")
    dims = {v.shape for v in table.values()}
    if len(dims) != 1 or len(next(iter(dims))) != 1:
        raise ValidationError(f"inconsistent embedding dimensions: {sorted(dims)}")
    dim = next(iter(dims))[0]
    values = np.zeros((len(docs), dim))
    for row, doc in enumerate(docs):
        vectors = [table[t] for t in doc.tokens if t in table]
        if vectors:
            values[row] = np.mean(vectors, axis=0)
    return FeatureMatrix(tuple(d.id for d in docs), values, feature="static-embed")


def load_embedding_table(path: str | Path) -> dict[str, np.ndarray]:
    """Read a text embedding table: one token plus its floats per line."""
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"embedding table not found: {path}")
    table: dict[str, np.ndarray] = {}
    dim = None
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            token, raw = parts[0], parts[1:]
            try:
                vector = np.array([float(x) for x in raw])
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: bad embedding value: {exc}") from exc
            if dim is None:
                dim = vector.shape[0]
                if dim == 0:
                    raise DataFormatError(f"{path}:{lineno}: token without vector")
            elif vector.shape[0] != dim:
                raise DataFormatError(
                    f"{path}:{lineno}: expected {dim} dims, got {vector.shape[0]}"
                )
            table[token] = vector
    if not table:
        raise DataFormatError(f"{path}: empty embedding table")
    return table


def corpus_fingerprint(docs: list[TokenizedDoc]) -> str:
    """Stable hash of ids and tokens, used to key feature caches."""
    digest = hashlib.sha256()
    for doc in docs:
        digest.update(doc.id.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(" ".join(doc.tokens).encode("utf-8"))
        digest.update(b"\x01")
    return digest.hexdigest()[:16]


def save_matrix(matrix: FeatureMatrix, path: str | Path) -> None:
    np.savez(
        path,
        ids=np.array(matrix.ids, dtype=object),
        values=matrix.values,
        feature=np.array(matrix.feature),
    )


def load_matrix(path: str | Path) -> FeatureMatrix:
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"feature matrix file not found: {path}")
    with np.load(path, allow_pickle=True) as data:
        return FeatureMatrix(
            ids=tuple(str(i) for i in data["ids"]),
            values=data["values"],
            feature=str(data["feature"]),
        )


def cache_path(cache_dir: str | Path, docs: list[TokenizedDoc], feature: str) -> Path:
    """Cache file location keyed by (corpus fingerprint, feature name)."""
    return Path(cache_dir) / f"{corpus_fingerprint(docs)}__{feature}.npz"
