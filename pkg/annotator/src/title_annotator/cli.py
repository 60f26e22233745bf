"""Command line for the corpus annotator."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .annotate import AnnotationJob, annotate


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="title-annotate",
        description="Enrich a raw abstract/title corpus with tokens, entities, and embeddings.",
    )
    parser.add_argument("--in", dest="input_path", type=Path, required=True)
    parser.add_argument("--out", dest="output_path", type=Path, required=True)
    parser.add_argument(
        "--encoders",
        default="hash-64",
        help="comma-separated encoder tags (hash[-salt]-<dim> or hf:<model>)",
    )
    parser.add_argument("--ner", default="caps", help="ner tag (caps or scispacy:<model>)")
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--layer", type=int, default=-1,
                        help="hidden layer for transformer encoders (default: last)")
    args = parser.parse_args(argv)

    job = AnnotationJob(
        input_path=args.input_path,
        output_path=args.output_path,
        encoders=[t.strip() for t in args.encoders.split(",") if t.strip()],
        ner_model=args.ner,
        batch_size=args.batch_size,
        layer=args.layer,
    )
    try:
        summary = annotate(job)
    except Exception as exc:
        print(f"title-annotate: error: {exc}", file=sys.stderr)
        return 1
    encoders = ", ".join(f"{tag} (dim {dim})" for tag, dim in summary.encoders_applied.items())
    print(
        f"annotated {summary.records_processed} records, "
        f"{summary.entities_found} entities, encoders: {encoders}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
