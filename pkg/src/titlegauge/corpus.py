"""Corpus loading, validation, filtering, and summary statistics.

The interchange format is line-delimited JSON, one record per line:

    {"id": str,
     "abstract": {"text": str, "tokens": [str], "entities": [[start, end, surface]]},
     "reference_title": {... same keys, plus "embeddings": block or [block, ...]},
     "hypotheses": {"<system>": {... same as reference_title}}}

where an embedding block is {"model": str, "dim": int, "vectors": [[float]]}.
``tokens``, ``entities`` and ``embeddings`` are optional. Raw text is
tokenized by the engine when ``tokens`` is absent; entities and embeddings
are never invented. Vectors are stored at 32-bit precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingMatrix
from .entities import EntityMention
from .textprep import TokenizedText, tokenize

__all__ = [
    "SchemaError",
    "AnnotatedField",
    "EvalRecord",
    "CorpusStats",
    "load_corpus",
    "save_corpus",
    "normalize_whitespace",
    "filter_corpus",
    "corpus_stats",
]


class SchemaError(ValueError):
    """A corpus file violates the interchange schema."""


@dataclass
class AnnotatedField:
    """One text field (abstract or title) with its annotations."""

    raw_text: str
    tokens: TokenizedText | None = None
    entities: list[EntityMention] | None = None
    embeddings: dict[str, EmbeddingMatrix] = field(default_factory=dict)
    label: str = ""


@dataclass
class EvalRecord:
    """One paper: abstract, reference title, and per-system hypothesis titles."""

    id: str
    abstract: AnnotatedField
    reference_title: AnnotatedField
    hypotheses: dict[str, AnnotatedField] = field(default_factory=dict)


@dataclass
class CorpusStats:
    record_count: int
    mean_title_tokens: float
    pct_titles_le_15: float
    title_length_histogram: dict[int, int]
    mean_abstract_tokens: float


def normalize_whitespace(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return " ".join(text.split())


def _align_offsets(raw_text: str, tokens: list[str]) -> list[tuple[int, int]] | None:
    """Greedy case-insensitive alignment of file-supplied tokens to raw text."""
    lowered = raw_text.lower()
    offsets = []
    cursor = 0
    for tok in tokens:
        pos = lowered.find(tok, cursor)
        if pos < 0:
            return None
        offsets.append((pos, pos + len(tok)))
        cursor = pos + len(tok)
    return offsets


_FIELD_KEYS = {"text", "tokens", "entities", "embeddings"}


def _parse_embedding_block(block, where: str) -> EmbeddingMatrix:
    if not isinstance(block, dict):
        raise SchemaError(f"{where}: embedding block must be an object")
    missing = {"model", "dim", "vectors"} - block.keys()
    if missing:
        raise SchemaError(f"{where}: embedding block missing {sorted(missing)}")
    extra = block.keys() - {"model", "dim", "vectors"}
    if extra:
        raise SchemaError(f"{where}: unknown embedding keys {sorted(extra)}")
    vectors = np.asarray(block["vectors"], dtype=np.float32)
    if vectors.ndim != 2 or vectors.shape[1] != block["dim"]:
        raise SchemaError(f"{where}: vectors do not form rows of dim {block['dim']}")
    try:
        return EmbeddingMatrix(vectors=vectors, model_tag=str(block["model"]))
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _parse_field(obj, where: str, allow_embeddings: bool) -> AnnotatedField:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: field must be an object")
    if "text" not in obj or not isinstance(obj["text"], str):
        raise SchemaError(f"{where}: missing string 'text'")
    extra = obj.keys() - _FIELD_KEYS
    if extra:
        raise SchemaError(f"{where}: unknown keys {sorted(extra)}")
    if not allow_embeddings and "embeddings" in obj:
        raise SchemaError(f"{where}: embeddings are only allowed on title fields")

    raw_text = obj["text"]
    if "tokens" in obj:
        raw_tokens = obj["tokens"]
        if not isinstance(raw_tokens, list) or not all(isinstance(t, str) for t in raw_tokens):
            raise SchemaError(f"{where}: tokens must be a list of strings")
        lowered = [t.lower() for t in raw_tokens]
        tokens = TokenizedText(tokens=lowered, offsets=_align_offsets(raw_text, lowered))
    else:
        tokens = tokenize(raw_text)

    entities: list[EntityMention] | None = None
    if "entities" in obj:
        raw_entities = obj["entities"]
        if not isinstance(raw_entities, list):
            raise SchemaError(f"{where}: entities must be a list")
        entities = []
        for k, span in enumerate(raw_entities):
            if (
                not isinstance(span, list)
                or len(span) != 3
                or not isinstance(span[0], int)
                or not isinstance(span[1], int)
                or not isinstance(span[2], str)
            ):
                raise SchemaError(
                    f"{where}: entity {k} must be [start, end, surface]"
                )
            start, end, surface = span
            if not (0 <= start < end <= len(tokens.tokens)):
                raise SchemaError(
                    f"{where}: entity {k} span [{start}, {end}) outside token range"
                )
            try:
                entities.append(EntityMention.from_surface(surface, (start, end)))
            except ValueError as exc:
                raise SchemaError(f"{where}: entity {k}: {exc}") from exc

    embeddings: dict[str, EmbeddingMatrix] = {}
    if "embeddings" in obj:
        blocks = obj["embeddings"]
        if isinstance(blocks, dict):
            blocks = [blocks]
        if not isinstance(blocks, list):
            raise SchemaError(f"{where}: embeddings must be a block or list of blocks")
        for block in blocks:
            emb = _parse_embedding_block(block, where)
            if emb.model_tag in embeddings:
                raise SchemaError(f"{where}: duplicate embedding model '{emb.model_tag}'")
            if len(emb) != len(tokens.tokens):
                raise SchemaError(
                    f"{where}: embeddings for model '{emb.model_tag}' have "
                    f"{len(emb)} rows for {len(tokens.tokens)} tokens"
                )
            embeddings[emb.model_tag] = emb

    return AnnotatedField(
        raw_text=raw_text,
        tokens=tokens,
        entities=entities,
        embeddings=embeddings,
        label=where,
    )


def _parse_record(obj, line_no: int) -> EvalRecord:
    where = f"line {line_no}"
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: record must be an object")
    extra = obj.keys() - {"id", "abstract", "reference_title", "hypotheses"}
    if extra:
        raise SchemaError(f"{where}: unknown keys {sorted(extra)}")
    rec_id = obj.get("id")
    if not isinstance(rec_id, str) or not rec_id:
        raise SchemaError(f"{where}: missing non-empty string 'id'")
    if "abstract" not in obj or "reference_title" not in obj:
        raise SchemaError(f"{where}: record '{rec_id}' needs abstract and reference_title")

    abstract = _parse_field(obj["abstract"], f"{where}: abstract", allow_embeddings=False)
    reference = _parse_field(
        obj["reference_title"], f"{where}: reference_title", allow_embeddings=True
    )
    hypotheses: dict[str, AnnotatedField] = {}
    raw_hyps = obj.get("hypotheses", {})
    if not isinstance(raw_hyps, dict):
        raise SchemaError(f"{where}: hypotheses must be an object")
    for system, hyp_obj in raw_hyps.items():
        hypotheses[system] = _parse_field(
            hyp_obj, f"{where}: hypotheses[{system}]", allow_embeddings=True
        )
    return EvalRecord(
        id=rec_id, abstract=abstract, reference_title=reference, hypotheses=hypotheses
    )


def load_corpus(path) -> list[EvalRecord]:
    """Parse a JSONL corpus file; every record comes back tokenized."""
    records: list[EvalRecord] = []
    seen_ids: set[str] = set()
    with open(Path(path), "r", encoding="utf-8") as fp:
        for line_no, line in enumerate(fp, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"line {line_no}: malformed JSON ({exc.msg})") from exc
            record = _parse_record(obj, line_no)
            if record.id in seen_ids:
                raise SchemaError(f"line {line_no}: duplicate record id '{record.id}'")
            seen_ids.add(record.id)
            records.append(record)
    return records


def _field_to_json(f: AnnotatedField, with_embeddings: bool) -> dict:
    out: dict = {"text": f.raw_text}
    if f.tokens is not None:
        out["tokens"] = list(f.tokens.tokens)
    if f.entities is not None:
        out["entities"] = [[e.token_span[0], e.token_span[1], e.surface] for e in f.entities]
    if with_embeddings and f.embeddings:
        blocks = [
            {
                "model": tag,
                "dim": emb.dim,
                "vectors": [[float(x) for x in row] for row in emb.vectors],
            }
            for tag, emb in sorted(f.embeddings.items())
        ]
        out["embeddings"] = blocks[0] if len(blocks) == 1 else blocks
    return out


def save_corpus(records: list[EvalRecord], path) -> None:
    """Write records back out in the interchange schema, one JSON per line."""
    with open(Path(path), "w", encoding="utf-8") as fp:
        for rec in records:
            obj = {
                "id": rec.id,
                "abstract": _field_to_json(rec.abstract, with_embeddings=False),
                "reference_title": _field_to_json(rec.reference_title, with_embeddings=True),
                "hypotheses": {
                    system: _field_to_json(hyp, with_embeddings=True)
                    for system, hyp in rec.hypotheses.items()
                },
            }
            fp.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _require_tokens(f: AnnotatedField, rec_id: str, name: str) -> TokenizedText:
    if f.tokens is None:
        raise ValueError(f"record '{rec_id}': field '{name}' is not tokenized")
    return f.tokens


def filter_corpus(
    records: list[EvalRecord],
    min_abstract_tokens: int = 20,
    min_title_tokens: int = 3,
) -> list[EvalRecord]:
    """Keep records with abstract and reference title at or above the minimums."""
    kept = []
    for rec in records:
        abstract = _require_tokens(rec.abstract, rec.id, "abstract")
        title = _require_tokens(rec.reference_title, rec.id, "reference_title")
        if len(abstract) >= min_abstract_tokens and len(title) >= min_title_tokens:
            kept.append(rec)
    return kept


def corpus_stats(records: list[EvalRecord]) -> CorpusStats:
    """Token statistics over reference titles (and mean abstract length)."""
    if not records:
        raise ValueError("cannot compute statistics for an empty corpus")
    title_lengths = []
    abstract_lengths = []
    for rec in records:
        title_lengths.append(len(_require_tokens(rec.reference_title, rec.id, "reference_title")))
        abstract_lengths.append(len(_require_tokens(rec.abstract, rec.id, "abstract")))
    histogram: dict[int, int] = {}
    for length in title_lengths:
        histogram[length] = histogram.get(length, 0) + 1
    n = len(records)
    return CorpusStats(
        record_count=n,
        mean_title_tokens=sum(title_lengths) / n,
        pct_titles_le_15=100.0 * sum(1 for x in title_lengths if x <= 15) / n,
        title_length_histogram=dict(sorted(histogram.items())),
        mean_abstract_tokens=sum(abstract_lengths) / n,
    )
