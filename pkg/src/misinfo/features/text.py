"""Tweet text normalization and tokenization.

All downstream features (keyword filters, n-gram statistics, vectorizers)
share this tokenization so that token-boundary semantics are consistent
across the toolkit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

URL_TOKEN = "<url>"
USER_TOKEN = "<user>"

_URL_RE = re.compile(r"(?:https?://\S+|www\.\S+)")
_MENTION_RE = re.compile(r"@\w+")
_HASH_RE = re.compile(r"#(\w)")
# strip everything that is not a word character, whitespace, or the angle
# brackets of the <url>/<user> placeholders
_PUNCT_RE = re.compile(r"[^\w\s<>]")


@dataclass(frozen=True)
class TokenizedDoc:
    """A document reduced to lowercase whitespace-free tokens."""

    id: str
    tokens: tuple[str, ...]

    def __post_init__(self):
        for tok in self.tokens:
            if not tok or any(c.isspace() for c in tok):
                raise ValueError(f"invalid token {tok!r} in doc {self.id!r}")


def preprocess(text: str, doc_id: str = "") -> TokenizedDoc:
    """Normalize tweet text into tokens.

    Lowercases, replaces URLs with ``<url>`` and @mentions with ``<user>``,
    strips '#' from hashtags, drops remaining punctuation, and splits on
    whitespace. Text that is empty after cleaning yields an empty token list.
    """
    cleaned = text.lower()
    cleaned = _URL_RE.sub(f" {URL_TOKEN} ", cleaned)
    cleaned = _MENTION_RE.sub(f" {USER_TOKEN} ", cleaned)
    cleaned = _HASH_RE.sub(r"\1", cleaned)
    cleaned = _PUNCT_RE.sub(" ", cleaned)
    return TokenizedDoc(id=doc_id, tokens=tuple(cleaned.split()))


def tokenize(text: str) -> tuple[str, ...]:
    """Token list of ``preprocess`` without the document wrapper."""
    return preprocess(text).tokens
