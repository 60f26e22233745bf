"""Entity-level factual consistency scores.

A hypothesis entity matches a text if any of its constituent words occurs in
that text's word set (partial-word rule, applied uniformly to abstract and
title targets). Every ratio comes in two counting modes: NU treats entity
mentions as a list, U deduplicates mentions by their normalized word
sequence. Ratios with a zero denominator are undefined and skipped at
aggregation time rather than scored as 0.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, fields
from typing import TYPE_CHECKING

from .textprep import tokenize

if TYPE_CHECKING:  # pragma: no cover
    from .corpus import AnnotatedField

# Small built-in list for the optional stopword filter (default off).
STOPWORDS = frozenset(
    """a an and are as at be by for from has have in is it its of on or
    that the to was were will with we our this these those""".split()
)


def _strip_punct(word: str) -> str:
    return "".join(ch for ch in word if not unicodedata.category(ch).startswith("P"))


def normalize_entity_words(surface: str) -> list[str]:
    """Lowercased, punctuation-stripped words of an entity surface string."""
    words = []
    for piece in surface.split():
        cleaned = _strip_punct(piece).lower()
        if cleaned:
            words.append(cleaned)
    return words


@dataclass
class EntityMention:
    """A named-entity span: surface string, normalized words, token span."""

    surface: str
    words: list[str]
    token_span: tuple[int, int]

    @classmethod
    def from_surface(cls, surface: str, token_span: tuple[int, int]) -> "EntityMention":
        words = normalize_entity_words(surface)
        if not words:
            raise ValueError(f"entity surface {surface!r} has no usable words")
        return cls(surface=surface, words=words, token_span=token_span)

    def word_key(self) -> tuple[str, ...]:
        return tuple(self.words)


@dataclass
class EntityScores:
    """Per-record entity ratios; None marks an undefined (zero-denominator) value."""

    prec_s_nu: float | None = None
    prec_s_u: float | None = None
    prec_t_nu: float | None = None
    recall_t_nu: float | None = None
    f1_t_nu: float | None = None
    prec_t_u: float | None = None
    recall_t_u: float | None = None
    f1_t_u: float | None = None

    @staticmethod
    def field_names() -> list[str]:
        return [f.name for f in fields(EntityScores)]


@dataclass
class AggregateEntityScores:
    """Corpus-level macro averages (x100); None where undefined everywhere."""

    values: dict[str, float | None]
    skipped: dict[str, int]
    record_count: int


def field_word_set(f, stopwords: bool = False) -> set[str]:
    """Normalized word set of a field's tokens; punctuation-only tokens drop out."""
    tokens = getattr(f, "tokens", None)
    if tokens is None:
        raise ValueError("field is not tokenized")
    words = set()
    for tok in tokens:
        cleaned = _strip_punct(tok).lower()
        if cleaned and not (stopwords and cleaned in STOPWORDS):
            words.add(cleaned)
    return words


def entity_match(e: EntityMention, target_words: set[str], stopwords: bool = False) -> bool:
    """True iff at least one constituent word of the entity occurs in the target."""
    for word in e.words:
        if stopwords and word in STOPWORDS:
            continue
        if word in target_words:
            return True
    return False


def intersect_nonunique(x: list[EntityMention], y_words: set[str], stopwords: bool = False) -> int:
    """Count mentions in x (with multiplicity) matching the target word set."""
    return sum(1 for e in x if entity_match(e, y_words, stopwords))


def _dedupe(x: list[EntityMention]) -> list[EntityMention]:
    seen: set[tuple[str, ...]] = set()
    unique = []
    for e in x:
        key = e.word_key()
        if key not in seen:
            seen.add(key)
            unique.append(e)
    return unique


def intersect_unique(x: list[EntityMention], y_words: set[str], stopwords: bool = False) -> int:
    """Count distinct entities of x (by word sequence) matching the target."""
    return intersect_nonunique(_dedupe(x), y_words, stopwords)


def _ratio(num: int, denom: int) -> float | None:
    return None if denom == 0 else num / denom


def _f1(p: float | None, r: float | None) -> float | None:
    if p is None or r is None:
        return None
    if p + r == 0:
        return 0.0
    return 2.0 * p * r / (p + r)


def _require_entities(f, name: str) -> list[EntityMention]:
    ents = getattr(f, "entities", None)
    if ents is None:
        raise ValueError(f"field '{name}' has no entity annotation")
    return ents


def entity_scores(h, t, s, stopwords: bool = False) -> EntityScores:
    """All eight entity consistency ratios for one record.

    h, t, s are the hypothesis title, reference title, and abstract fields;
    each must carry an entity annotation (an empty list is valid, absence is
    an error).
    """
    h_ents = _require_entities(h, getattr(h, "label", "") or "hypothesis")
    t_ents = _require_entities(t, getattr(t, "label", "") or "reference_title")
    _require_entities(s, getattr(s, "label", "") or "abstract")

    s_words = field_word_set(s)
    t_words = field_word_set(t)
    h_words = field_word_set(h)

    h_unique = _dedupe(h_ents)
    t_unique = _dedupe(t_ents)

    prec_s_nu = _ratio(intersect_nonunique(h_ents, s_words, stopwords), len(h_ents))
    prec_s_u = _ratio(intersect_nonunique(h_unique, s_words, stopwords), len(h_unique))
    prec_t_nu = _ratio(intersect_nonunique(h_ents, t_words, stopwords), len(h_ents))
    prec_t_u = _ratio(intersect_nonunique(h_unique, t_words, stopwords), len(h_unique))
    recall_t_nu = _ratio(intersect_nonunique(t_ents, h_words, stopwords), len(t_ents))
    recall_t_u = _ratio(intersect_nonunique(t_unique, h_words, stopwords), len(t_unique))

    return EntityScores(
        prec_s_nu=prec_s_nu,
        prec_s_u=prec_s_u,
        prec_t_nu=prec_t_nu,
        recall_t_nu=recall_t_nu,
        f1_t_nu=_f1(prec_t_nu, recall_t_nu),
        prec_t_u=prec_t_u,
        recall_t_u=recall_t_u,
        f1_t_u=_f1(prec_t_u, recall_t_u),
    )


def aggregate_entity_scores(per_record: list[EntityScores]) -> AggregateEntityScores:
    """Macro-average each defined field x100; count skipped records per field."""
    if not per_record:
        raise ValueError("cannot aggregate an empty score list")
    values: dict[str, float | None] = {}
    skipped: dict[str, int] = {}
    for name in EntityScores.field_names():
        defined = [getattr(r, name) for r in per_record if getattr(r, name) is not None]
        skipped[name] = len(per_record) - len(defined)
        values[name] = 100.0 * sum(defined) / len(defined) if defined else None
    return AggregateEntityScores(values=values, skipped=skipped, record_count=len(per_record))


def heuristic_capitalized_entities(f) -> list[EntityMention]:
    """Fallback entity spotter: maximal runs of capitalized or acronym tokens.

    Not a reference annotator -- a stand-in for corpora without NER spans so
    the engine stays testable on its own. Needs offset-aligned tokens to
    recover cased surfaces from the raw text.
    """
    raw = getattr(f, "raw_text", None)
    tokens = getattr(f, "tokens", None)
    if raw is None or tokens is None or tokens.offsets is None:
        raise ValueError("heuristic entity spotting needs raw text and offset-aligned tokens")

    def entityish(surface: str) -> bool:
        if not surface or not surface[0].isalpha():
            return False
        return surface[0].isupper() or (len(surface) >= 2 and surface.isupper())

    mentions: list[EntityMention] = []
    run_start = None
    spans = tokens.offsets
    for i, (start, end) in enumerate(spans + [(len(raw) + 1, len(raw) + 2)]):
        is_hit = i < len(spans) and entityish(raw[start:end])
        if is_hit and run_start is None:
            run_start = i
        elif not is_hit and run_start is not None:
            surf = raw[spans[run_start][0] : spans[i - 1][1]]
            try:
                mentions.append(EntityMention.from_surface(surf, (run_start, i)))
            except ValueError:
                pass
            run_start = None
    return mentions
