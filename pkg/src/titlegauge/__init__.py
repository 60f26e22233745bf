"""titlegauge: evaluation engine for machine-generated research-paper titles.

Corpus in (line-delimited JSON), report out (markdown / CSV / JSON): lexical
overlap (ROUGE-1/2/L, METEOR), embedding-based similarity (greedy cosine
matching, mover similarity via exact Word Mover's Distance), and entity-level
factual consistency in unique / non-unique counting modes.
"""

from .corpus import (
    AnnotatedField,
    CorpusStats,
    EvalRecord,
    SchemaError,
    corpus_stats,
    filter_corpus,
    load_corpus,
    normalize_whitespace,
    save_corpus,
)
from .embeddings import (
    EmbeddingMatrix,
    IdfTable,
    build_idf,
    cosine_matrix,
    greedy_match_score,
    mover_score,
    wmd,
)
from .entities import (
    AggregateEntityScores,
    EntityMention,
    EntityScores,
    aggregate_entity_scores,
    entity_match,
    entity_scores,
    heuristic_capitalized_entities,
    intersect_nonunique,
    intersect_unique,
)
from .lexical import (
    MeteorAlignment,
    PrfScore,
    lcs_length,
    meteor_align,
    meteor_score,
    rouge_l,
    rouge_n,
)
from .report import MetricConfig, MetricReport, evaluate, render
from .stemmer import stem
from .textprep import NGramMultiset, TokenizedText, ngram_counts, tokenize, truncate
from .transport import TransportPlan, solve_transport

__version__ = "0.1.0"
