"""Named-entity recognizers producing token-span annotations.

  caps                  capitalized/acronym-run heuristic; deterministic and
                        dependency-free (not a reference annotator).
  scispacy:<model>      scientific-domain NER via scispaCy, when installed.
"""

from __future__ import annotations


class NerUnavailable(RuntimeError):
    """The requested NER model cannot be constructed in this environment."""


class CapsRecognizer:
    """Maximal runs of capitalized or all-caps tokens become one entity each."""

    tag = "caps"

    def recognize(self, text: str, spans: list[tuple[int, int]]) -> list[list]:
        def entityish(surface: str) -> bool:
            if not surface or not surface[0].isalpha():
                return False
            return surface[0].isupper() or (len(surface) >= 2 and surface.isupper())

        entities: list[list] = []
        run_start = None
        surfaces = [text[s:e] for s, e in spans]
        for i in range(len(spans) + 1):
            hit = i < len(spans) and entityish(surfaces[i])
            if hit and run_start is None:
                run_start = i
            elif not hit and run_start is not None:
                surface = text[spans[run_start][0] : spans[i - 1][1]]
                entities.append([run_start, i, surface])
                run_start = None
        return entities


class ScispacyRecognizer:
    """Adapter over a scispaCy pipeline; aligns character entities to tokens."""

    def __init__(self, tag: str, model_name: str):
        self.tag = tag
        try:
            import spacy
        except ImportError as exc:
            raise NerUnavailable(f"ner '{tag}': spacy not installed") from exc
        try:
            self._nlp = spacy.load(model_name)
        except Exception as exc:
            raise NerUnavailable(f"ner '{tag}': cannot load '{model_name}': {exc}") from exc

    def recognize(self, text: str, spans: list[tuple[int, int]]) -> list[list]:
        entities: list[list] = []
        for span in self._nlp(text).ents:
            covered = [
                i for i, (s, e) in enumerate(spans)
                if s < span.end_char and e > span.start_char
            ]
            if covered:
                entities.append([covered[0], covered[-1] + 1, span.text])
        return entities


def resolve_ner(tag: str):
    if tag == "caps":
        return CapsRecognizer()
    if tag.startswith("scispacy:"):
        return ScispacyRecognizer(tag, model_name=tag.split(":", 1)[1])
    raise NerUnavailable(f"unknown ner tag '{tag}' (expected 'caps' or 'scispacy:<model>')")
