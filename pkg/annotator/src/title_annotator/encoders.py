"""Word-embedding backends.

Two encoder families are supported, selected by tag:

  hash[-<salt>]-<dim>   deterministic pseudo-embeddings derived from a hash of
                        each word; no model download, context-free; meant for
                        pipeline and schema testing, not semantic evaluation.
  hf:<model_id>         a transformers encoder; subword vectors from the
                        selected hidden layer are mean-pooled to word level.

Every encoder resolves (and any model loads) before annotation starts, so an
unavailable model aborts the run before output is written.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np


class EncoderUnavailable(RuntimeError):
    """The requested encoder cannot be constructed in this environment."""


_HASH_TAG = re.compile(r"^hash(?:-[A-Za-z0-9]+)*-(\d+)$")


class HashEncoder:
    """Deterministic unit vectors seeded per (tag, word). Testing backend."""

    def __init__(self, tag: str, dim: int):
        self.tag = tag
        self.dim = dim

    def encode_words(self, words: list[str]) -> np.ndarray:
        out = np.empty((len(words), self.dim), dtype=np.float32)
        for row, word in enumerate(words):
            digest = hashlib.sha256(f"{self.tag}:{word}".encode("utf-8")).digest()
            rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
            vec = rng.standard_normal(self.dim)
            out[row] = (vec / np.linalg.norm(vec)).astype(np.float32)
        return out


class TransformersEncoder:
    """Contextual word vectors: selected hidden layer, mean-pooled per word."""

    def __init__(self, tag: str, model_id: str, layer: int = -1):
        self.tag = tag
        self.layer = layer
        try:
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:
            raise EncoderUnavailable(f"encoder '{tag}': transformers not installed") from exc
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_id)
            self._model = AutoModel.from_pretrained(model_id, output_hidden_states=True)
            self._model.eval()
        except Exception as exc:
            raise EncoderUnavailable(f"encoder '{tag}': cannot load '{model_id}': {exc}") from exc
        self.dim = int(self._model.config.hidden_size)

    def encode_words(self, words: list[str]) -> np.ndarray:
        import torch

        encoded = self._tokenizer(
            words, is_split_into_words=True, return_tensors="pt", truncation=True
        )
        with torch.no_grad():
            hidden = self._model(**encoded).hidden_states[self.layer][0]
        word_ids = encoded.word_ids(0)
        out = np.zeros((len(words), self.dim), dtype=np.float32)
        counts = np.zeros(len(words))
        for position, word_id in enumerate(word_ids):
            if word_id is not None:
                out[word_id] += hidden[position].numpy()
                counts[word_id] += 1
        missing = counts == 0
        if missing.any():
            # Words the subword tokenizer dropped entirely: fall back to the
            # sequence mean so no row is left all-zero.
            fallback = hidden.mean(dim=0).numpy()
            out[missing] = fallback
            counts[missing] = 1
        return out / counts[:, None]


def resolve_encoder(tag: str, layer: int = -1):
    match = _HASH_TAG.match(tag)
    if match:
        return HashEncoder(tag, dim=int(match.group(1)))
    if tag.startswith("hf:"):
        return TransformersEncoder(tag, model_id=tag[3:], layer=layer)
    raise EncoderUnavailable(
        f"unknown encoder tag '{tag}' (expected 'hash[-salt]-<dim>' or 'hf:<model>')"
    )
