"""Command-line interface: evaluate, filter, stats, render."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .corpus import corpus_stats, filter_corpus, load_corpus, save_corpus
from .report import METRIC_FAMILIES, MetricConfig, MetricReport, evaluate, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="titlegauge",
        description="Evaluate machine-generated research-paper titles against references.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("evaluate", help="score a corpus and write a report")
    p_eval.add_argument("corpus", type=Path)
    p_eval.add_argument("--systems", help="comma-separated system names (default: all)")
    p_eval.add_argument(
        "--metrics",
        default="rouge,meteor",
        help=f"comma-separated metric families from: {','.join(METRIC_FAMILIES)}",
    )
    p_eval.add_argument("--out", type=Path, help="output path (default: stdout)")
    p_eval.add_argument("--format", default="markdown", choices=["markdown", "csv", "json"])
    p_eval.add_argument("--workers", type=int, default=1)
    p_eval.add_argument("--truncate-hyp", type=int, default=None, metavar="N",
                        help="score only the first N hypothesis tokens")
    p_eval.add_argument("--rouge-stemming", action=argparse.BooleanOptionalAction, default=True)
    p_eval.add_argument("--idf", default="corpus", choices=["corpus", "uniform"],
                        help="MoverScore token weighting")
    p_eval.add_argument("--moverscore-model", default=None, metavar="TAG",
                        help="embedding model tag MoverScore should use")
    p_eval.add_argument("--entity-stopwords", action="store_true",
                        help="ignore stopwords inside entity word matching")
    p_eval.add_argument("--heuristic-entities", action="store_true",
                        help="fill missing entity annotations with the capitalized-span heuristic")

    p_filter = sub.add_parser("filter", help="drop records below the length thresholds")
    p_filter.add_argument("corpus", type=Path)
    p_filter.add_argument("--min-abstract", type=int, default=20)
    p_filter.add_argument("--min-title", type=int, default=3)
    p_filter.add_argument("--out", type=Path, help="output path (default: stdout)")

    p_stats = sub.add_parser("stats", help="print corpus statistics as JSON")
    p_stats.add_argument("corpus", type=Path)

    p_render = sub.add_parser("render", help="re-render a JSON report")
    p_render.add_argument("report", type=Path)
    p_render.add_argument("--format", default="markdown", choices=["markdown", "csv", "json"])
    p_render.add_argument("--out", type=Path, help="output path (default: stdout)")

    return parser


def _write_bytes(data: bytes, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(data.decode("utf-8"))
    else:
        out.write_bytes(data)


def _cmd_evaluate(args) -> int:
    records = load_corpus(args.corpus)
    if args.systems:
        wanted = [s.strip() for s in args.systems.split(",") if s.strip()]
        present = {s for rec in records for s in rec.hypotheses}
        missing = [s for s in wanted if s not in present]
        if missing:
            raise ValueError(f"systems not present in corpus: {', '.join(missing)}")
        for rec in records:
            rec.hypotheses = {s: rec.hypotheses[s] for s in wanted if s in rec.hypotheses}
    config = MetricConfig(
        metrics=tuple(m.strip() for m in args.metrics.split(",") if m.strip()),
        rouge_stemming=args.rouge_stemming,
        truncate_hyp=args.truncate_hyp,
        idf_mode=args.idf,
        moverscore_model=args.moverscore_model,
        entity_stopwords=args.entity_stopwords,
        heuristic_entities=args.heuristic_entities,
        workers=args.workers,
    )
    report = evaluate(records, config)
    _write_bytes(render(report, args.format), args.out)
    return 0


def _cmd_filter(args) -> int:
    records = load_corpus(args.corpus)
    kept = filter_corpus(records, args.min_abstract, args.min_title)
    if args.out is None:
        save_corpus(kept, "/dev/stdout")
    else:
        save_corpus(kept, args.out)
    print(f"kept {len(kept)} of {len(records)} records", file=sys.stderr)
    return 0


def _cmd_stats(args) -> int:
    stats = corpus_stats(load_corpus(args.corpus))
    obj = asdict(stats)
    obj["title_length_histogram"] = {
        str(k): v for k, v in stats.title_length_histogram.items()
    }
    print(json.dumps(obj, indent=2))
    return 0


def _cmd_render(args) -> int:
    report = MetricReport.from_json(args.report.read_bytes())
    _write_bytes(render(report, args.format), args.out)
    return 0


_COMMANDS = {
    "evaluate": _cmd_evaluate,
    "filter": _cmd_filter,
    "stats": _cmd_stats,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"titlegauge {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
