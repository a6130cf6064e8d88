import numpy as np
import pytest

from misinfo.errors import ValidationError
from misinfo.features.encoders import FakeHashEncoder, contextual_encode, get_encoder
from misinfo.features.text import TokenizedDoc


def doc(*tokens, id="d"):
    return TokenizedDoc(id=id, tokens=tuple(tokens))


class TestFakeHashEncoder:
    def test_pooled_dimension_contract(self):
        encoder = FakeHashEncoder(dimension=32, max_tokens=16)
        pooled, sequences = contextual_encode([doc("vaksin", "aman", id="1")], encoder)
        assert pooled.values.shape == (1, 32)
        assert sequences.arrays.shape == (1, 16, 32)

    def test_frozen_determinism(self):
        docs = [doc("vaksin", "covid", id="1")]
        first, _ = contextual_encode(docs, FakeHashEncoder(dimension=16))
        second, _ = contextual_encode(docs, FakeHashEncoder(dimension=16))
        assert np.array_equal(first.values, second.values)

    def test_truncation(self):
        encoder = FakeHashEncoder(dimension=8, max_tokens=128)
        long_doc = doc(*[f"w{i}" for i in range(300)], id="1")
        _, sequences = contextual_encode([long_doc], encoder)
        assert sequences.arrays.shape[1] == 128
        assert sequences.lengths == (128,)

    def test_empty_doc_zero_pooled_row(self):
        encoder = FakeHashEncoder(dimension=8)
        pooled, sequences = contextual_encode([doc(id="1")], encoder)
        assert np.all(pooled.values == 0)
        assert sequences.lengths == (0,)

    def test_pooled_is_mean_of_token_vectors(self):
        encoder = FakeHashEncoder(dimension=8)
        pooled, _ = contextual_encode([doc("a", "b", id="1")], encoder)
        expected = (encoder.token_vector("a") + encoder.token_vector("b")) / 2
        assert np.allclose(pooled.values[0], expected)

    def test_vectors_in_range(self):
        encoder = FakeHashEncoder(dimension=64)
        for token in ("vaksin", "hoaks", "<url>"):
            vec = encoder.token_vector(token)
            assert np.all(vec >= -1.0) and np.all(vec <= 1.0)


class TestRegistry:
    def test_hash_names_resolve(self):
        encoder = get_encoder("hash-24", max_tokens=10, mode="finetunable")
        assert encoder.handle.dimension == 24
        assert encoder.handle.max_tokens == 10
        assert encoder.handle.mode == "finetunable"

    def test_unknown_encoder_unavailable(self):
        with pytest.raises(ValidationError, match="unavailable"):
            get_encoder("indo-bert-base")

    def test_bad_geometry_rejected(self):
        with pytest.raises(ValidationError):
            FakeHashEncoder(dimension=0)
