"""Shared builders for corpus fixtures used across the test modules."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from titlegauge.corpus import AnnotatedField, EvalRecord
from titlegauge.embeddings import EmbeddingMatrix
from titlegauge.entities import EntityMention
from titlegauge.textprep import tokenize

DATA_DIR = Path(__file__).parent / "data"


def field(text: str, entities=None, embeddings=None, label: str = "") -> AnnotatedField:
    """Annotated field with engine tokenization and optional annotations."""
    return AnnotatedField(
        raw_text=text,
        tokens=tokenize(text),
        entities=entities,
        embeddings=embeddings or {},
        label=label,
    )


def mention(surface: str, span=(0, 1)) -> EntityMention:
    return EntityMention.from_surface(surface, span)


def one_hot(tokens: list[str], vocab: list[str], tag: str = "onehot") -> EmbeddingMatrix:
    """Orthonormal per-type embeddings: one basis vector per vocabulary type."""
    index = {w: i for i, w in enumerate(vocab)}
    vectors = np.zeros((len(tokens), len(vocab)), dtype=np.float32)
    for row, tok in enumerate(tokens):
        vectors[row, index[tok]] = 1.0
    return EmbeddingMatrix(vectors=vectors, model_tag=tag)


def record(rec_id: str, abstract: str, title: str, hyps: dict[str, str] | None = None,
           **field_kwargs) -> EvalRecord:
    return EvalRecord(
        id=rec_id,
        abstract=field(abstract, label="abstract"),
        reference_title=field(title, label="reference_title"),
        hypotheses={
            name: field(text, label=f"hypotheses[{name}]")
            for name, text in (hyps or {}).items()
        },
    )


def write_jsonl(path: Path, objs: list[dict]) -> Path:
    with open(path, "w", encoding="utf-8") as fp:
        for obj in objs:
            fp.write(json.dumps(obj) + "\n")
    return path


@pytest.fixture
def fixture10_path() -> Path:
    """The bundled 10-record corpus with tokens, entities, and embeddings."""
    return DATA_DIR / "fixture10.jsonl"
