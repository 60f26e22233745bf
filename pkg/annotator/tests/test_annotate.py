"""Contract tests: the annotator's output must satisfy the evaluation
engine's interchange schema, reached only through the engine's CLI."""

import importlib.util
import json
import subprocess
import sys
from pathlib import Path

import pytest

title_annotator = pytest.importorskip("title_annotator")

from title_annotator.annotate import AnnotationError, AnnotationJob, annotate
from title_annotator.encoders import EncoderUnavailable, HashEncoder, resolve_encoder
from title_annotator.ner import CapsRecognizer, NerUnavailable, resolve_ner
from title_annotator.words import word_tokens
from title_annotator.cli import main as annotate_cli

RAW_PAPERS = [
    ("Transformer models improve abstractive summarization of scientific text.",
     "Abstractive Summarization with Transformers",
     "Transformer Summarization of Text"),
    ("Low-resource machine translation benefits from monolingual domain data.",
     "Reinforcement Learning for Low-Resource Translation",
     "Improving Low-Resource Translation"),
    ("Graph neural networks capture citation structure for classification.",
     "Attention Pooling in Graph Neural Networks",
     "Graph Attention for Citations"),
    ("Entity linking in biomedical text requires domain vocabularies.",
     "Joint Abbreviation Resolution for Entity Linking",
     "Biomedical Entity Linking"),
    ("Keyword extraction guides title generation for technical documents.",
     "Keyword Guided Title Generation",
     "Guided Decoding for Titles"),
    ("Dense retrieval depends on hard negative mining strategies.",
     "Hard Negative Mining for Dense Retrieval",
     "Curriculum Mining for Retrieval"),
    ("Speech recognition models degrade on accented speech varieties.",
     "Adapter Layers for Accent Robust Recognition",
     "Accent Adaptation with Adapters"),
    ("Program synthesis from examples struggles with loop invariants.",
     "Neural Ranking of Loop Invariants",
     "Learning Invariants for Synthesis"),
    ("Question answering over tables needs schema aware encoders.",
     "Schema Aware Encoding for Table QA",
     "Tables with Position Channels"),
    ("Contrastive pretraining aligns code and natural language.",
     "Contrastive Pretraining for Code Search",
     "Dual Encoders for Code"),
]


def write_raw_corpus(path: Path) -> Path:
    with open(path, "w", encoding="utf-8") as fp:
        for i, (abstract, title, hyp) in enumerate(RAW_PAPERS, start=1):
            fp.write(json.dumps({
                "id": f"r{i:02d}",
                "abstract": {"text": abstract},
                "reference_title": {"text": title},
                "hypotheses": {"sysA": {"text": hyp}},
            }) + "\n")
    return path


def run_engine_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "titlegauge.cli", *argv],
        capture_output=True, text=True,
    )


@pytest.fixture
def annotated(tmp_path):
    raw = write_raw_corpus(tmp_path / "raw.jsonl")
    out = tmp_path / "annotated.jsonl"
    summary = annotate(AnnotationJob(
        input_path=raw, output_path=out, encoders=["hash-8", "hash-sci-8"],
    ))
    return raw, out, summary


class TestContract:
    def test_output_passes_engine_schema_validator(self, annotated):
        _, out, summary = annotated
        assert summary.records_processed == 10
        result = run_engine_cli("stats", str(out))
        assert result.returncode == 0, result.stderr
        stats = json.loads(result.stdout)
        assert stats["record_count"] == 10

    def test_engine_can_score_annotated_corpus(self, annotated):
        _, out, _ = annotated
        result = run_engine_cli(
            "evaluate", str(out),
            "--metrics", "rouge,bertscore,moverscore,entity",
            "--moverscore-model", "hash-8",
            "--format", "json",
        )
        assert result.returncode == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["systems"] == ["sysA"]
        assert "prec_s_NU" in report["columns"]

    def test_title_embedding_rows_equal_token_counts(self, annotated):
        _, out, _ = annotated
        for line in out.read_text().splitlines():
            obj = json.loads(line)
            titles = [obj["reference_title"], *obj["hypotheses"].values()]
            for title in titles:
                blocks = title["embeddings"]
                blocks = [blocks] if isinstance(blocks, dict) else blocks
                assert {b["model"] for b in blocks} == {"hash-8", "hash-sci-8"}
                for block in blocks:
                    assert len(block["vectors"]) == len(title["tokens"])
                    assert all(len(v) == block["dim"] for v in block["vectors"])
            assert "embeddings" not in obj["abstract"]

    def test_rerun_yields_identical_files(self, annotated, tmp_path):
        raw, out, _ = annotated
        again = tmp_path / "annotated2.jsonl"
        annotate(AnnotationJob(
            input_path=raw, output_path=again, encoders=["hash-8", "hash-sci-8"],
        ))
        assert out.read_bytes() == again.read_bytes()

    def test_token_counts_agree_with_engine_tokenizer(self, annotated, tmp_path):
        # Stripping our tokens forces the engine to re-tokenize the raw text;
        # identical statistics mean the two tokenizers agree on these records.
        _, out, _ = annotated
        stripped = tmp_path / "stripped.jsonl"
        with open(stripped, "w") as fp:
            for line in out.read_text().splitlines():
                obj = json.loads(line)
                fp.write(json.dumps({
                    "id": obj["id"],
                    "abstract": {"text": obj["abstract"]["text"]},
                    "reference_title": {"text": obj["reference_title"]["text"]},
                    "hypotheses": {
                        k: {"text": v["text"]} for k, v in obj["hypotheses"].items()
                    },
                }) + "\n")
        ours = run_engine_cli("stats", str(out))
        theirs = run_engine_cli("stats", str(stripped))
        assert ours.returncode == 0 and theirs.returncode == 0
        assert json.loads(ours.stdout) == json.loads(theirs.stdout)


class TestRejection:
    def test_empty_title_rejected_with_record_id(self, tmp_path):
        raw = tmp_path / "raw.jsonl"
        with open(raw, "w") as fp:
            fp.write(json.dumps({
                "id": "bad01",
                "abstract": {"text": "some abstract"},
                "reference_title": {"text": "   "},
                "hypotheses": {},
            }) + "\n")
        out = tmp_path / "out.jsonl"
        with pytest.raises(AnnotationError, match="bad01"):
            annotate(AnnotationJob(input_path=raw, output_path=out, encoders=["hash-4"]))
        assert not out.exists()

    def test_unavailable_hf_encoder_fails_before_output(self, tmp_path):
        raw = write_raw_corpus(tmp_path / "raw.jsonl")
        out = tmp_path / "out.jsonl"
        with pytest.raises(EncoderUnavailable):
            annotate(AnnotationJob(
                input_path=raw, output_path=out,
                encoders=["hf:this-model-does-not-exist-anywhere"],
            ))
        assert not out.exists()

    def test_unknown_encoder_tag(self):
        with pytest.raises(EncoderUnavailable, match="unknown encoder tag"):
            resolve_encoder("word2vec-300")

    def test_unknown_ner_tag(self):
        with pytest.raises(NerUnavailable, match="unknown ner tag"):
            resolve_ner("regexner")

    def test_scispacy_without_install_is_a_clean_error(self):
        if importlib.util.find_spec("spacy") is not None:
            pytest.skip("spacy installed; the adapter would try to load the model")
        with pytest.raises(NerUnavailable):
            resolve_ner("scispacy:en_core_sci_sm")

    def test_duplicate_ids_rejected(self, tmp_path):
        raw = tmp_path / "raw.jsonl"
        rec = {"id": "dup", "abstract": {"text": "a"}, "reference_title": {"text": "t"}}
        raw.write_text(json.dumps(rec) + "\n" + json.dumps(rec) + "\n")
        with pytest.raises(AnnotationError, match="duplicate"):
            annotate(AnnotationJob(input_path=raw, output_path=tmp_path / "o.jsonl",
                                   encoders=["hash-4"]))


class TestComponents:
    def test_hash_encoder_dim_and_determinism(self):
        enc = HashEncoder("hash-16", 16)
        a = enc.encode_words(["graph", "neural"])
        b = enc.encode_words(["graph", "neural"])
        assert a.shape == (2, 16)
        assert (a == b).all()

    def test_hash_encoders_with_different_salts_differ(self):
        a = resolve_encoder("hash-8").encode_words(["token"])
        b = resolve_encoder("hash-sci-8").encode_words(["token"])
        assert not (a == b).all()

    def test_caps_recognizer_runs(self):
        text = "We apply Graph Neural Networks and NMT to parsing"
        tokens, spans = word_tokens(text)
        entities = CapsRecognizer().recognize(text, spans)
        assert [e[2] for e in entities] == ["We", "Graph Neural Networks", "NMT"]
        start, end, _ = entities[1]
        assert tokens[start:end] == ["graph", "neural", "networks"]

    def test_word_tokens_detach_punctuation(self):
        tokens, _ = word_tokens("A Tool, for NLP.")
        assert tokens == ["a", "tool", ",", "for", "nlp", "."]


class TestCli:
    def test_cli_end_to_end_matches_api_output(self, tmp_path, capsys, annotated):
        raw, api_out, _ = annotated
        cli_out = tmp_path / "cli.jsonl"
        code = annotate_cli([
            "--in", str(raw), "--out", str(cli_out),
            "--encoders", "hash-8,hash-sci-8", "--ner", "caps",
        ])
        captured = capsys.readouterr()
        assert code == 0
        assert "annotated 10 records" in captured.out
        assert cli_out.read_bytes() == api_out.read_bytes()

    def test_cli_reports_errors(self, tmp_path, capsys):
        code = annotate_cli([
            "--in", str(tmp_path / "missing.jsonl"), "--out", str(tmp_path / "o.jsonl"),
        ])
        captured = capsys.readouterr()
        assert code == 1
        assert "error" in captured.err
