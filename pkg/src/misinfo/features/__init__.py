"""Feature extraction: tokenization, vectorizers, encoders, class balancing."""

from misinfo.features.balance import BalanceConfig, balance
from misinfo.features.encoders import (
    EncoderHandle,
    FakeHashEncoder,
    contextual_encode,
    get_encoder,
)
from misinfo.features.text import TokenizedDoc, preprocess
from misinfo.features.vectorize import (
    FeatureMatrix,
    SequenceBatch,
    Vocabulary,
    bow_binary,
    embed_mean,
    fit_vocabulary,
    load_embedding_table,
    load_matrix,
    save_matrix,
    tfidf,
)

__all__ = [
    "BalanceConfig",
    "EncoderHandle",
    "FakeHashEncoder",
    "FeatureMatrix",
    "SequenceBatch",
    "TokenizedDoc",
    "Vocabulary",
    "balance",
    "bow_binary",
    "contextual_encode",
    "embed_mean",
    "fit_vocabulary",
    "get_encoder",
    "load_embedding_table",
    "load_matrix",
    "preprocess",
    "save_matrix",
    "tfidf",
]
