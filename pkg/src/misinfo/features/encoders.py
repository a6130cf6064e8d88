"""Pluggable contextual encoders producing pooled and per-token vectors.

An encoder is addressed by an :class:`EncoderHandle` (name, dimension, token
limit, frozen or finetunable). The built-in ``hash-<dim>`` encoder derives
token vectors from a cryptographic hash, so it needs no model download and is
bit-deterministic; it exists so training and evaluation pipelines can run
end-to-end in tests and demos. Real pre-trained encoders plug in through the
same interface.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np

from misinfo.errors import ValidationError
from misinfo.features.text import TokenizedDoc
from misinfo.features.vectorize import FeatureMatrix, SequenceBatch


@dataclass(frozen=True)
class EncoderHandle:
    """Identity and fixed geometry of a contextual encoder."""

    name: str
    dimension: int
    max_tokens: int
    mode: str = "frozen"

    def __post_init__(self):
        if self.dimension < 1 or self.max_tokens < 1:
            raise ValidationError("encoder dimension and max_tokens must be positive")
        if self.mode not in ("frozen", "finetunable"):
            raise ValidationError(f"unknown encoder mode {self.mode!r}")


class FakeHashEncoder:
    """Deterministic stand-in encoder: token vectors from a blake2b digest.

    Vectors are fixed per (encoder name, token), uniform in [-1, 1]. Pooling
    is the mean over real (unpadded) token vectors.
    """

    def __init__(self, dimension: int = 64, max_tokens: int = 128, mode: str = "frozen"):
        self.handle = EncoderHandle(
            name=f"hash-{dimension}", dimension=dimension, max_tokens=max_tokens, mode=mode
        )
        self._cache: dict[str, np.ndarray] = {}

    def token_vector(self, token: str) -> np.ndarray:
        vec = self._cache.get(token)
        if vec is None:
            dim = self.handle.dimension
            seed = f"{self.handle.name}:{token}".encode("utf-8")
            # 8 bytes of digest per coordinate, mapped into [-1, 1]
            blocks = (dim * 8 + 63) // 64
            raw = b"".join(
                hashlib.blake2b(seed + i.to_bytes(4, "big"), digest_size=64).digest()
                for i in range(blocks)
            )
            ints = np.frombuffer(raw[: dim * 8], dtype=">u8").astype(np.float64)
            vec = ints / float(2**63) - 1.0
            self._cache[token] = vec
        return vec

    def encode(self, docs: list[TokenizedDoc]) -> tuple[FeatureMatrix, SequenceBatch]:
        dim, limit = self.handle.dimension, self.handle.max_tokens
        pooled = np.zeros((len(docs), dim))
        arrays = np.zeros((len(docs), limit, dim))
        lengths = []
        for row, doc in enumerate(docs):
            tokens = doc.tokens[:limit]
            lengths.append(len(tokens))
            for pos, token in enumerate(tokens):
                arrays[row, pos] = self.token_vector(token)
            if tokens:
                pooled[row] = arrays[row, : len(tokens)].mean(axis=0)
        ids = tuple(d.id for d in docs)
        return (
            FeatureMatrix(ids, pooled, feature=f"contextual-pooled:{self.handle.name}"),
            SequenceBatch(ids, arrays, tuple(lengths)),
        )


_HASH_NAME_RE = re.compile(r"^hash-(\d+)$")


def get_encoder(name: str, max_tokens: int = 128, mode: str = "frozen") -> FakeHashEncoder:
    """Resolve an encoder by name. Only ``hash-<dim>`` ships with the repo."""
    match = _HASH_NAME_RE.match(name)
    if match:
        return FakeHashEncoder(dimension=int(match.group(1)), max_tokens=max_tokens, mode=mode)
    raise ValidationError(
        f"encoder {name!r} unavailable; built-in encoders match 'hash-<dim>'"
    )


def contextual_encode(
    docs: list[TokenizedDoc], encoder: FakeHashEncoder
) -> tuple[FeatureMatrix, SequenceBatch]:
    """Pooled matrix plus padded/truncated per-token sequences for the docs.

    Deterministic per (document, encoder) while the encoder is frozen.
    Documents longer than the encoder's token limit are truncated, never
    rejected.
    """
    return encoder.encode(docs)
