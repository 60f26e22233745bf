"""Corpus annotation: tokens + entity spans everywhere, embeddings on titles.

Reads a raw corpus (text-only fields allowed), writes the evaluation engine's
interchange schema. All models resolve before any input is read, and output
appears atomically only after every record annotates cleanly, so partial
files are never produced.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .encoders import resolve_encoder
from .ner import resolve_ner
from .words import word_tokens


@dataclass
class AnnotationJob:
    input_path: str | Path
    output_path: str | Path
    encoders: list[str] = field(default_factory=lambda: ["hash-64"])
    ner_model: str = "caps"
    batch_size: int = 32
    layer: int = -1


@dataclass
class AnnotationSummary:
    records_processed: int
    entities_found: int
    encoders_applied: dict[str, int]  # tag -> dim


class AnnotationError(ValueError):
    """The input corpus cannot be annotated."""


def _normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


def _field_text(obj, where: str) -> str:
    if isinstance(obj, dict):
        text = obj.get("text")
    else:
        text = obj
    if not isinstance(text, str):
        raise AnnotationError(f"{where}: expected a text field")
    return _normalize_whitespace(text)


def _annotate_field(text: str, recognizer, encoders=None) -> dict:
    tokens, spans = word_tokens(text)
    out = {
        "text": text,
        "tokens": tokens,
        "entities": recognizer.recognize(text, spans),
    }
    if encoders:
        blocks = []
        for encoder in encoders:
            vectors = encoder.encode_words(tokens)
            blocks.append({
                "model": encoder.tag,
                "dim": encoder.dim,
                "vectors": [[float(x) for x in row] for row in vectors],
            })
        out["embeddings"] = blocks[0] if len(blocks) == 1 else blocks
    return out


def annotate(job: AnnotationJob) -> AnnotationSummary:
    """Annotate every record of the input corpus; returns a run summary."""
    encoders = [resolve_encoder(tag, layer=job.layer) for tag in job.encoders]
    recognizer = resolve_ner(job.ner_model)

    lines_out: list[str] = []
    entities_found = 0
    seen_ids: set[str] = set()

    with open(Path(job.input_path), "r", encoding="utf-8") as fp:
        for line_no, line in enumerate(fp, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise AnnotationError(f"line {line_no}: malformed JSON ({exc.msg})") from exc
            rec_id = obj.get("id")
            if not isinstance(rec_id, str) or not rec_id:
                raise AnnotationError(f"line {line_no}: missing non-empty 'id'")
            if rec_id in seen_ids:
                raise AnnotationError(f"line {line_no}: duplicate record id '{rec_id}'")
            seen_ids.add(rec_id)
            if "abstract" not in obj or "reference_title" not in obj:
                raise AnnotationError(
                    f"record '{rec_id}': needs abstract and reference_title"
                )

            abstract_text = _field_text(obj["abstract"], f"record '{rec_id}': abstract")
            title_texts = {
                "reference_title": _field_text(
                    obj["reference_title"], f"record '{rec_id}': reference_title"
                )
            }
            for system, hyp in (obj.get("hypotheses") or {}).items():
                title_texts[f"hypotheses[{system}]"] = _field_text(
                    hyp, f"record '{rec_id}': hypotheses[{system}]"
                )
            for name, text in title_texts.items():
                if not text:
                    raise AnnotationError(f"record '{rec_id}': empty title in {name}")

            annotated = {
                "id": rec_id,
                "abstract": _annotate_field(abstract_text, recognizer),
                "reference_title": _annotate_field(
                    title_texts["reference_title"], recognizer, encoders
                ),
                "hypotheses": {
                    system: _annotate_field(
                        title_texts[f"hypotheses[{system}]"], recognizer, encoders
                    )
                    for system in (obj.get("hypotheses") or {})
                },
            }
            for part in [annotated["abstract"], annotated["reference_title"],
                         *annotated["hypotheses"].values()]:
                entities_found += len(part["entities"])
            lines_out.append(json.dumps(annotated, ensure_ascii=False))

    output_path = Path(job.output_path)
    tmp_path = output_path.with_suffix(output_path.suffix + ".tmp")
    with open(tmp_path, "w", encoding="utf-8") as fp:
        fp.write("".join(line + "\n" for line in lines_out))
    os.replace(tmp_path, output_path)

    return AnnotationSummary(
        records_processed=len(lines_out),
        entities_found=entities_found,
        encoders_applied={enc.tag: enc.dim for enc in encoders},
    )
