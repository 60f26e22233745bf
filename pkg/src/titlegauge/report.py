"""End-to-end evaluation: per-record scoring, macro-averaged report, rendering.

Scores are macro-averaged per system and reported x100 with 2-decimal
rendering; markdown output bold-marks each column's maximum like the
comparison tables this engine reproduces.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import entities as ent
from . import lexical
from .corpus import AnnotatedField, EvalRecord
from .embeddings import EmbeddingMatrix, IdfTable, build_idf, greedy_match_score, mover_score
from .textprep import TokenizedText, stem, truncate

METRIC_FAMILIES = ("rouge", "meteor", "bertscore", "moverscore", "entity")

_ENTITY_COLUMNS = [
    ("prec_s_NU", "prec_s_nu"),
    ("prec_s_U", "prec_s_u"),
    ("prec_t_NU", "prec_t_nu"),
    ("recall_t_NU", "recall_t_nu"),
    ("F1_t_NU", "f1_t_nu"),
    ("prec_t_U", "prec_t_u"),
    ("recall_t_U", "recall_t_u"),
    ("F1_t_U", "f1_t_u"),
]


@dataclass
class MetricConfig:
    """Flags controlling metric behavior; all of them feed the fingerprint."""

    metrics: tuple[str, ...] = ("rouge", "meteor")
    rouge_stemming: bool = True
    truncate_hyp: int | None = None
    idf_mode: str = "corpus"  # "corpus" builds idf over titles; "uniform" skips idf
    moverscore_model: str | None = None
    entity_stopwords: bool = False
    heuristic_entities: bool = False
    workers: int = 1

    def __post_init__(self):
        for name in self.metrics:
            if name not in METRIC_FAMILIES:
                raise ValueError(f"unknown metric family '{name}'")
        if self.idf_mode not in ("corpus", "uniform"):
            raise ValueError(f"unknown idf mode '{self.idf_mode}'")

    def fingerprint_fields(self) -> dict:
        return {
            "metrics": sorted(set(self.metrics)),
            "rouge_stemming": self.rouge_stemming,
            "truncate_hyp": self.truncate_hyp,
            "idf_mode": self.idf_mode,
            "moverscore_model": self.moverscore_model,
            "entity_stopwords": self.entity_stopwords,
            "heuristic_entities": self.heuristic_entities,
        }

    def fingerprint(self) -> str:
        digest = hashlib.sha256(
            json.dumps(self.fingerprint_fields(), sort_keys=True).encode("utf-8")
        )
        return digest.hexdigest()[:12]


@dataclass
class MetricReport:
    """Macro-averaged scores (x100): one row per system, one column per metric."""

    systems: list[str]
    columns: list[str]
    values: list[list[float | None]]
    skip_counts: dict[str, dict[str, int]] = field(default_factory=dict)
    config_fingerprint: str = ""
    config: dict = field(default_factory=dict)

    def to_json(self) -> bytes:
        obj = {
            "systems": self.systems,
            "columns": self.columns,
            "values": self.values,
            "skip_counts": self.skip_counts,
            "config_fingerprint": self.config_fingerprint,
            "config": self.config,
        }
        return (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8")

    @classmethod
    def from_json(cls, data: bytes) -> "MetricReport":
        obj = json.loads(data.decode("utf-8"))
        return cls(
            systems=list(obj["systems"]),
            columns=list(obj["columns"]),
            values=[list(row) for row in obj["values"]],
            skip_counts={k: dict(v) for k, v in obj.get("skip_counts", {}).items()},
            config_fingerprint=obj.get("config_fingerprint", ""),
            config=dict(obj.get("config", {})),
        )


def _embedding_column_labels(tags: list[str]) -> dict[str, str]:
    """Column label per encoder tag; scientific-domain encoders get their own column."""
    labels: dict[str, str] = {}
    used: set[str] = set()
    for tag in sorted(tags):
        low = tag.lower()
        if "scibert" in low:
            label = "SciBERTScore"
        elif "bert" in low:
            label = "BERTScore"
        else:
            label = f"BERTScore[{tag}]"
        if label in used:
            label = f"{label}[{tag}]"
        used.add(label)
        labels[tag] = label
    return labels


def _truncated_view(f: AnnotatedField, max_tokens: int | None) -> AnnotatedField:
    if max_tokens is None or f.tokens is None or len(f.tokens) <= max_tokens:
        return f
    tokens = truncate(f.tokens, max_tokens)
    embeddings = {
        tag: EmbeddingMatrix(vectors=emb.vectors[:max_tokens], model_tag=tag)
        for tag, emb in f.embeddings.items()
    }
    ents_kept = None
    if f.entities is not None:
        ents_kept = [e for e in f.entities if e.token_span[1] <= max_tokens]
    return AnnotatedField(
        raw_text=f.raw_text,
        tokens=tokens,
        entities=ents_kept,
        embeddings=embeddings,
        label=f.label,
    )


def _stemmed(tokens: TokenizedText) -> list[str]:
    return [stem(t) for t in tokens.tokens]


class _RecordScorer:
    """Scores one record for every (system, column); pure per record."""

    def __init__(self, config: MetricConfig, systems: list[str],
                 columns: list[str], tag_by_column: dict[str, str],
                 idf: IdfTable | None):
        self.config = config
        self.systems = systems
        self.columns = columns
        self.tag_by_column = tag_by_column
        self.idf = idf

    def __call__(self, rec: EvalRecord) -> dict[str, dict[str, float | None]]:
        out: dict[str, dict[str, float | None]] = {}
        for system in self.systems:
            hyp = rec.hypotheses.get(system)
            if hyp is None:
                raise ValueError(f"record '{rec.id}' has no hypothesis for system '{system}'")
            hyp = _truncated_view(hyp, self.config.truncate_hyp)
            out[system] = self._score_pair(rec, hyp)
        return out

    def _score_pair(self, rec: EvalRecord, hyp: AnnotatedField) -> dict[str, float | None]:
        ref = rec.reference_title
        cfg = self.config
        row: dict[str, float | None] = {}

        def run(metric: str, fn):
            try:
                return fn()
            except ValueError as exc:
                raise ValueError(f"metric '{metric}': record '{rec.id}': {exc}") from exc

        if "rouge" in cfg.metrics:
            hyp_toks = _stemmed(hyp.tokens) if cfg.rouge_stemming else hyp.tokens.tokens
            ref_toks = _stemmed(ref.tokens) if cfg.rouge_stemming else ref.tokens.tokens
            row["ROUGE-1"] = run("rouge", lambda: lexical.rouge_n(hyp_toks, ref_toks, 1).f1)
            row["ROUGE-2"] = run("rouge", lambda: lexical.rouge_n(hyp_toks, ref_toks, 2).f1)
            row["ROUGE-L"] = run("rouge", lambda: lexical.rouge_l(hyp_toks, ref_toks).f1)
        if "meteor" in cfg.metrics:
            row["METEOR"] = run(
                "meteor", lambda: lexical.meteor_score(hyp.tokens.tokens, ref.tokens.tokens)
            )
        if "moverscore" in cfg.metrics:
            row["MoverScore"] = run(
                "moverscore",
                lambda: mover_score(hyp, ref, self.idf, model_tag=cfg.moverscore_model),
            )
        if "bertscore" in cfg.metrics:
            for column, tag in self.tag_by_column.items():
                def score(tag=tag):
                    if tag not in hyp.embeddings:
                        raise ValueError(f"hypothesis lacks embeddings for model '{tag}'")
                    if tag not in ref.embeddings:
                        raise ValueError(f"reference lacks embeddings for model '{tag}'")
                    return greedy_match_score(hyp.embeddings[tag], ref.embeddings[tag]).f1
                row[column] = run("bertscore", score)
        if "entity" in cfg.metrics:
            scores = run(
                "entity",
                lambda: ent.entity_scores(
                    hyp, ref, rec.abstract, stopwords=cfg.entity_stopwords
                ),
            )
            for column, attr in _ENTITY_COLUMNS:
                row[column] = getattr(scores, attr)
        return row


def _plan_columns(corpus: list[EvalRecord], config: MetricConfig) -> tuple[list[str], dict[str, str]]:
    columns: list[str] = []
    tag_by_column: dict[str, str] = {}
    if "rouge" in config.metrics:
        columns += ["ROUGE-1", "ROUGE-2", "ROUGE-L"]
    if "meteor" in config.metrics:
        columns.append("METEOR")
    if "moverscore" in config.metrics:
        columns.append("MoverScore")
    if "bertscore" in config.metrics:
        tags = sorted({tag for rec in corpus for tag in rec.reference_title.embeddings})
        if not tags:
            raise ValueError(
                "metric 'bertscore': no embedding blocks found on reference titles"
            )
        labels = _embedding_column_labels(tags)
        for tag in sorted(tags):
            tag_by_column[labels[tag]] = tag
        columns += list(tag_by_column.keys())
    if "entity" in config.metrics:
        columns += [name for name, _ in _ENTITY_COLUMNS]
    return columns, tag_by_column


def _apply_heuristic_entities(corpus: list[EvalRecord]) -> None:
    for rec in corpus:
        for f in [rec.abstract, rec.reference_title, *rec.hypotheses.values()]:
            if f.entities is None:
                f.entities = ent.heuristic_capitalized_entities(f)


def evaluate(corpus: list[EvalRecord], config: MetricConfig | None = None) -> MetricReport:
    """Score every (system, metric) pair and macro-average x100.

    Deterministic for a given corpus and configuration, independent of the
    worker count.
    """
    config = config or MetricConfig()
    if not corpus:
        raise ValueError("cannot evaluate an empty corpus")

    systems: list[str] = []
    for rec in corpus:
        for system in rec.hypotheses:
            if system not in systems:
                systems.append(system)
    if not systems:
        raise ValueError("corpus has no hypothesis systems to evaluate")

    if config.heuristic_entities and "entity" in config.metrics:
        _apply_heuristic_entities(corpus)

    columns, tag_by_column = _plan_columns(corpus, config)

    idf: IdfTable | None = None
    if "moverscore" in config.metrics and config.idf_mode == "corpus":
        title_side = [rec.reference_title.tokens.tokens for rec in corpus]
        for system in systems:
            for rec in corpus:
                hyp = rec.hypotheses.get(system)
                if hyp is not None and hyp.tokens is not None:
                    title_side.append(hyp.tokens.tokens)
        idf = build_idf(title_side)

    scorer = _RecordScorer(config, systems, columns, tag_by_column, idf)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            per_record = list(pool.map(scorer, corpus))
    else:
        per_record = [scorer(rec) for rec in corpus]

    values: list[list[float | None]] = []
    skip_counts: dict[str, dict[str, int]] = {}
    for system in systems:
        row: list[float | None] = []
        for column in columns:
            cell_values = [res[system][column] for res in per_record]
            defined = [v for v in cell_values if v is not None]
            skipped = len(cell_values) - len(defined)
            if skipped:
                skip_counts.setdefault(system, {})[column] = skipped
            row.append(100.0 * sum(defined) / len(defined) if defined else None)
        values.append(row)

    return MetricReport(
        systems=systems,
        columns=columns,
        values=values,
        skip_counts=skip_counts,
        config_fingerprint=config.fingerprint(),
        config=config.fingerprint_fields(),
    )


def _format_cell(value: float | None, bold: bool) -> str:
    if value is None:
        return "n/a"
    text = f"{value:.2f}"
    return f"**{text}**" if bold else text


def _column_maxima(report: MetricReport) -> list[float | None]:
    maxima: list[float | None] = []
    for j in range(len(report.columns)):
        defined = [row[j] for row in report.values if row[j] is not None]
        maxima.append(max(defined) if defined else None)
    return maxima


def render(report: MetricReport, format: str = "markdown") -> bytes:
    """Render a report as markdown (bolded column maxima), csv, or json."""
    if format == "json":
        return report.to_json()
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["system", *report.columns])
        for system, row in zip(report.systems, report.values):
            writer.writerow([system] + ["" if v is None else f"{v:.2f}" for v in row])
        return buf.getvalue().encode("utf-8")
    if format == "markdown":
        maxima = _column_maxima(report)
        lines = ["| System | " + " | ".join(report.columns) + " |"]
        lines.append("| --- |" + " ---: |" * len(report.columns))
        for system, row in zip(report.systems, report.values):
            cells = [
                _format_cell(v, bold=(v is not None and maxima[j] is not None and v == maxima[j]))
                for j, v in enumerate(row)
            ]
            lines.append(f"| {system} | " + " | ".join(cells) + " |")
        for system in report.systems:
            skips = report.skip_counts.get(system, {})
            if skips:
                detail = ", ".join(f"{col}: {n}" for col, n in sorted(skips.items()))
                lines.append(f"\nSkipped (undefined) records for {system} -- {detail}")
        lines.append(f"\nConfig fingerprint: {report.config_fingerprint}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format '{format}'")
