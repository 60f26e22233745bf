"""title-annotator: offline corpus enrichment for the title evaluation engine.

Adds word tokens, entity spans, and per-word embeddings (one block per
encoder) to a raw abstract/title corpus, writing the engine's JSONL
interchange schema.
"""

from .annotate import AnnotationError, AnnotationJob, AnnotationSummary, annotate
from .encoders import EncoderUnavailable, resolve_encoder
from .ner import NerUnavailable, resolve_ner

__version__ = "0.1.0"
