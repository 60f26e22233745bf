"""Deterministic text preparation shared by all metrics.

Tokenization rule: split on whitespace, detach leading/trailing punctuation
as single-character tokens, lowercase everything, keep interior hyphens and
apostrophes intact.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from .stemmer import stem

__all__ = ["TokenizedText", "NGramMultiset", "tokenize", "stem", "ngram_counts", "truncate"]

_CHUNK = re.compile(r"\S+", re.UNICODE)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


@dataclass
class TokenizedText:
    """Lowercase tokens plus (start, end) character spans into the source text.

    Offsets are None for token lists loaded from a corpus file when they
    cannot be re-aligned to the raw text.
    """

    tokens: list[str] = field(default_factory=list)
    offsets: list[tuple[int, int]] | None = None

    def __post_init__(self):
        if self.offsets is not None:
            if len(self.offsets) != len(self.tokens):
                raise ValueError("tokens and offsets must have equal length")
            prev_end = -1
            for start, end in self.offsets:
                if start < prev_end or end <= start:
                    raise ValueError("offsets must be non-overlapping and increasing")
                prev_end = end

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


@dataclass
class NGramMultiset:
    n: int
    counts: dict[tuple[str, ...], int]

    def total(self) -> int:
        return sum(self.counts.values())


def tokenize(text: str) -> TokenizedText:
    """Split text into lowercase tokens with surface offsets."""
    tokens: list[str] = []
    offsets: list[tuple[int, int]] = []

    def emit(start: int, end: int) -> None:
        tokens.append(text[start:end].lower())
        offsets.append((start, end))

    for match in _CHUNK.finditer(text):
        a, b = match.start(), match.end()
        while a < b and _is_punct(text[a]):
            emit(a, a + 1)
            a += 1
        trailing: list[tuple[int, int]] = []
        while b > a and _is_punct(text[b - 1]):
            trailing.append((b - 1, b))
            b -= 1
        if a < b:
            emit(a, b)
        for span in reversed(trailing):
            emit(*span)

    return TokenizedText(tokens=tokens, offsets=offsets)


def _token_list(text) -> list[str]:
    if isinstance(text, TokenizedText):
        return text.tokens
    return list(text)


def ngram_counts(text, n: int) -> NGramMultiset:
    """Count all contiguous n-grams with multiplicity."""
    if n < 1:
        raise ValueError("n-gram order must be >= 1")
    tokens = _token_list(text)
    counts: dict[tuple[str, ...], int] = {}
    for i in range(len(tokens) - n + 1):
        key = tuple(tokens[i : i + n])
        counts[key] = counts.get(key, 0) + 1
    return NGramMultiset(n=n, counts=counts)


def truncate(text: TokenizedText, max_tokens: int) -> TokenizedText:
    """Keep the first max_tokens tokens; identity when already shorter."""
    if max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    if len(text.tokens) <= max_tokens:
        return text
    offsets = text.offsets[:max_tokens] if text.offsets is not None else None
    return TokenizedText(tokens=text.tokens[:max_tokens], offsets=offsets)
