"""Word tokenization for annotation: whitespace split with edge punctuation
detached, matching the convention of the evaluation engine's corpus schema."""

from __future__ import annotations

import re
import unicodedata

_CHUNK = re.compile(r"\S+", re.UNICODE)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def word_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of word tokens; punctuation at chunk edges splits off."""
    spans: list[tuple[int, int]] = []
    for match in _CHUNK.finditer(text):
        a, b = match.start(), match.end()
        while a < b and _is_punct(text[a]):
            spans.append((a, a + 1))
            a += 1
        trailing = []
        while b > a and _is_punct(text[b - 1]):
            trailing.append((b - 1, b))
            b -= 1
        if a < b:
            spans.append((a, b))
        spans.extend(reversed(trailing))
    return spans


def word_tokens(text: str) -> tuple[list[str], list[tuple[int, int]]]:
    """Lowercased tokens plus their surface spans."""
    spans = word_spans(text)
    return [text[s:e].lower() for s, e in spans], spans
