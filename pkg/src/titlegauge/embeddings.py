"""Embedding-based semantic metrics over supplied per-token vectors.

Greedy maximum-cosine matching (BERTScore family; the scientific-domain
variant is the same computation fed scientific-encoder vectors) and a
mover-style similarity built on exact Word Mover's Distance. Embeddings are
consumed from the corpus file, never produced here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .lexical import PrfScore
from .transport import TransportPlan, solve_transport

if TYPE_CHECKING:  # pragma: no cover
    from .corpus import AnnotatedField


@dataclass
class EmbeddingMatrix:
    """One vector per token, tagged with the encoder that produced it."""

    vectors: np.ndarray
    model_tag: str = ""

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float32)
        if self.vectors.ndim != 2:
            raise ValueError("embedding vectors must form a 2-D matrix")
        if not np.isfinite(self.vectors).all():
            raise ValueError("embedding vectors must be finite")
        if self.vectors.shape[0] and (np.abs(self.vectors).sum(axis=1) == 0).any():
            raise ValueError("embedding vectors must not be all-zero")

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return int(self.vectors.shape[0])


@dataclass
class IdfTable:
    """Per-token inverse document frequency weights for mover scoring."""

    weights: dict[str, float] = field(default_factory=dict)
    default_weight: float = 0.0

    def weight(self, token: str) -> float:
        return self.weights.get(token, self.default_weight)


def cosine_matrix(a: EmbeddingMatrix, b: EmbeddingMatrix) -> np.ndarray:
    """Pairwise cosine similarities, entry (i, j) = cos(a_i, b_j)."""
    if a.dim != b.dim:
        raise ValueError(f"embedding dimension mismatch: {a.dim} vs {b.dim}")
    av = a.vectors.astype(np.float64)
    bv = b.vectors.astype(np.float64)
    a_norm = np.linalg.norm(av, axis=1)
    b_norm = np.linalg.norm(bv, axis=1)
    if (a_norm == 0).any() or (b_norm == 0).any():
        raise ValueError("cosine similarity undefined for zero vectors")
    sims = (av / a_norm[:, None]) @ (bv / b_norm[:, None]).T
    return np.clip(sims, -1.0, 1.0)


def greedy_match_score(hyp: EmbeddingMatrix, ref: EmbeddingMatrix) -> PrfScore:
    """Greedy maximum-cosine matching: raw scores, no IDF, no rescaling.

    Precision averages, over hypothesis tokens, the best cosine against any
    reference token; recall is the mirror image.
    """
    if len(hyp) == 0 or len(ref) == 0:
        raise ValueError("greedy matching needs at least one token per side")
    sims = cosine_matrix(hyp, ref)
    precision = float(sims.max(axis=1).mean())
    recall = float(sims.max(axis=0).mean())
    return PrfScore.from_pr(precision, recall)


def build_idf(corpus_side) -> IdfTable:
    """idf(w) = log(1 + N / (1 + df(w))); unseen tokens weigh log(1 + N)."""
    texts = [list(t) for t in corpus_side]
    if not texts:
        raise ValueError("cannot build idf weights from an empty corpus")
    n = len(texts)
    df: dict[str, int] = {}
    for tokens in texts:
        for tok in set(tokens):
            df[tok] = df.get(tok, 0) + 1
    weights = {tok: math.log(1.0 + n / (1.0 + d)) for tok, d in df.items()}
    return IdfTable(weights=weights, default_weight=math.log(1.0 + n))


def wmd(
    hyp: EmbeddingMatrix,
    hyp_weights,
    ref: EmbeddingMatrix,
    ref_weights,
) -> TransportPlan:
    """Exact minimum-cost transport with ground cost 1 - cosine.

    Both weight vectors must already be normalized to sum to 1.
    """
    hw = np.asarray(hyp_weights, dtype=float)
    rw = np.asarray(ref_weights, dtype=float)
    if abs(hw.sum() - 1.0) > 1e-6 or abs(rw.sum() - 1.0) > 1e-6:
        raise ValueError("transport weights must be normalized to sum to 1")
    ground = 1.0 - cosine_matrix(hyp, ref)
    return solve_transport(ground, hw, rw)


def _side_weights(tokens: list[str], idf: IdfTable | None, side: str) -> np.ndarray:
    if idf is None:
        return np.full(len(tokens), 1.0 / len(tokens))
    raw = np.array([idf.weight(tok) for tok in tokens], dtype=float)
    total = raw.sum()
    if total <= 0:
        raise ValueError(f"idf weights on the {side} side sum to zero")
    return raw / total


def mover_score(hyp, ref, idf: IdfTable | None = None, model_tag: str | None = None) -> float:
    """Mover similarity between two annotated title fields: 1 - WMD, clamped.

    Token weights are the idf weights normalized per side (uniform when idf
    is None). Raises when a field carries no embeddings for the requested
    encoder tag.
    """
    hyp_emb = _field_embeddings(hyp, model_tag, "hypothesis")
    ref_emb = _field_embeddings(ref, model_tag, "reference")
    hyp_tokens = _field_tokens(hyp, "hypothesis")
    ref_tokens = _field_tokens(ref, "reference")
    plan = wmd(
        hyp_emb,
        _side_weights(hyp_tokens, idf, "hypothesis"),
        ref_emb,
        _side_weights(ref_tokens, idf, "reference"),
    )
    return min(1.0, max(0.0, 1.0 - plan.cost))


def _field_label(f, fallback: str) -> str:
    return getattr(f, "label", "") or fallback


def _field_tokens(f, fallback: str) -> list[str]:
    tokens = getattr(f, "tokens", None)
    if tokens is None:
        raise ValueError(f"field '{_field_label(f, fallback)}' is not tokenized")
    return list(tokens)


def _field_embeddings(f, model_tag: str | None, fallback: str) -> EmbeddingMatrix:
    blocks = getattr(f, "embeddings", None) or {}
    label = _field_label(f, fallback)
    if not blocks:
        raise ValueError(f"field '{label}' carries no embeddings")
    if model_tag is None:
        if len(blocks) > 1:
            tags = ", ".join(sorted(blocks))
            raise ValueError(
                f"field '{label}' has multiple embedding blocks ({tags}); specify a model tag"
            )
        return next(iter(blocks.values()))
    if model_tag not in blocks:
        raise ValueError(f"field '{label}' has no embeddings for model '{model_tag}'")
    return blocks[model_tag]
