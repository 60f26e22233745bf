"""Lexical overlap metrics between a hypothesis title and a reference title.

ROUGE-1/2 use clipped n-gram multiset overlap, ROUGE-L uses the whole-sequence
longest common subsequence, and METEOR uses a staged one-to-one unigram
alignment (exact match, then stem match) with a fragmentation penalty.
"""

from __future__ import annotations

from dataclasses import dataclass

from .stemmer import stem
from .textprep import TokenizedText, ngram_counts


@dataclass
class PrfScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "PrfScore":
        if precision + recall == 0:
            return cls(precision, recall, 0.0)
        return cls(precision, recall, 2.0 * precision * recall / (precision + recall))


@dataclass
class MeteorAlignment:
    """Matched (hyp_index, ref_index) pairs and the chunk count of the alignment."""

    pairs: list[tuple[int, int]]
    chunks: int

    @property
    def matches(self) -> int:
        return len(self.pairs)


def _tokens(text) -> list[str]:
    if isinstance(text, TokenizedText):
        return text.tokens
    return list(text)


def lcs_length(a, b) -> int:
    """Length of a longest common subsequence, by dynamic programming."""
    xs, ys = _tokens(a), _tokens(b)
    if not xs or not ys:
        return 0
    prev = [0] * (len(ys) + 1)
    for x in xs:
        cur = [0] * (len(ys) + 1)
        for j, y in enumerate(ys, start=1):
            if x == y:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[-1]


def rouge_n(hyp, ref, n: int) -> PrfScore:
    """Clipped n-gram overlap precision/recall/F1."""
    hyp_counts = ngram_counts(hyp, n)
    ref_counts = ngram_counts(ref, n)
    hyp_total = hyp_counts.total()
    ref_total = ref_counts.total()
    if hyp_total == 0 or ref_total == 0:
        return PrfScore(0.0, 0.0, 0.0)
    overlap = 0
    for gram, count in hyp_counts.counts.items():
        other = ref_counts.counts.get(gram)
        if other:
            overlap += min(count, other)
    return PrfScore.from_pr(overlap / hyp_total, overlap / ref_total)


def rouge_l(hyp, ref) -> PrfScore:
    """LCS-based precision/recall/F1 over whole token sequences."""
    hyp_tokens, ref_tokens = _tokens(hyp), _tokens(ref)
    if not hyp_tokens or not ref_tokens:
        return PrfScore(0.0, 0.0, 0.0)
    lcs = lcs_length(hyp_tokens, ref_tokens)
    return PrfScore.from_pr(lcs / len(hyp_tokens), lcs / len(ref_tokens))


def _chunk_count(pairs: list[tuple[int, int]]) -> int:
    """Chunks = maximal runs of pairs adjacent and in order on both sides."""
    ordered = sorted(pairs)
    chunks = 0
    prev = None
    for h, r in ordered:
        if prev is None or h != prev[0] + 1 or r != prev[1] + 1:
            chunks += 1
        prev = (h, r)
    return chunks


def _max_matching_size(candidates: dict[int, list[int]], n_ref: int) -> int:
    """Maximum bipartite matching size (augmenting paths)."""
    match_ref: dict[int, int] = {}

    def try_assign(i: int, seen: set[int]) -> bool:
        for j in candidates[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_ref or try_assign(match_ref[j], seen):
                match_ref[j] = i
                return True
        return False

    size = 0
    for i in sorted(candidates):
        if try_assign(i, set()):
            size += 1
    return size


def _best_stage_alignment(
    hyp_positions: list[int],
    candidates: dict[int, list[int]],
    fixed_pairs: list[tuple[int, int]],
    n_ref: int,
) -> list[tuple[int, int]]:
    """Pick a maximum-cardinality stage matching minimizing total chunk count.

    Depth-first over hypothesis positions in order, trying reference
    candidates left to right before skipping; the first full alignment found
    at the best chunk count therefore realizes the leftmost tie-break.
    Prefix chunk counts only grow as pairs are appended, which makes the
    branch-and-bound cut exact.
    """
    target = _max_matching_size(candidates, n_ref)
    if target == 0:
        return []

    fixed_sorted = sorted(fixed_pairs)
    all_positions = sorted(set(hyp_positions) | {h for h, _ in fixed_sorted})
    fixed_at = {h: r for h, r in fixed_sorted}

    best_pairs: list[list[tuple[int, int]]] = []
    best_chunks = [len(fixed_sorted) + target + 1]

    cand_left = {}
    remaining = 0
    for pos in reversed(sorted(candidates)):
        if candidates[pos]:
            remaining += 1
        cand_left[pos] = remaining

    def prefix_extend(prev: tuple[int, int] | None, pair: tuple[int, int], chunks: int):
        if prev is None or pair[0] != prev[0] + 1 or pair[1] != prev[1] + 1:
            return chunks + 1
        return chunks

    def dfs(idx: int, taken_ref: set[int], chosen: list[tuple[int, int]],
            prev: tuple[int, int] | None, chunks: int):
        if chunks >= best_chunks[0]:
            return
        if idx == len(all_positions):
            if len(chosen) == target:
                best_chunks[0] = chunks
                best_pairs.clear()
                best_pairs.append(list(chosen))
            return
        pos = all_positions[idx]
        if pos in fixed_at:
            pair = (pos, fixed_at[pos])
            dfs(idx + 1, taken_ref, chosen, pair, prefix_extend(prev, pair, chunks))
            return
        # Upper bound on how many stage matches are still reachable.
        available = any(j not in taken_ref for j in candidates.get(pos, ()))
        possible = len(chosen) + sum(
            1 for p in all_positions[idx:]
            if p not in fixed_at and any(j not in taken_ref for j in candidates.get(p, ()))
        )
        if possible < target:
            return
        for j in candidates.get(pos, ()):  # ascending ref positions
            if j in taken_ref:
                continue
            pair = (pos, j)
            taken_ref.add(j)
            chosen.append(pair)
            dfs(idx + 1, taken_ref, chosen, pair, prefix_extend(prev, pair, chunks))
            chosen.pop()
            taken_ref.remove(j)
        if possible - (1 if available else 0) >= target:
            dfs(idx + 1, taken_ref, chosen, prev, chunks)

    dfs(0, set(), [], None, 0)
    return best_pairs[0] if best_pairs else []


def meteor_align(hyp, ref) -> MeteorAlignment:
    """Staged one-to-one unigram alignment: exact match, then stem match.

    Within each stage the maximum number of matches is made, choosing among
    maximum matchings the one minimizing the chunk count of the alignment so
    far, ties resolved toward the leftmost hypothesis positions.
    """
    hyp_tokens, ref_tokens = _tokens(hyp), _tokens(ref)
    pairs: list[tuple[int, int]] = []
    matched_h: set[int] = set()
    matched_r: set[int] = set()

    def run_stage(key_fn) -> None:
        hyp_keys = {i: key_fn(tok) for i, tok in enumerate(hyp_tokens) if i not in matched_h}
        ref_keys = {j: key_fn(tok) for j, tok in enumerate(ref_tokens) if j not in matched_r}
        candidates = {
            i: [j for j in sorted(ref_keys) if ref_keys[j] == k]
            for i, k in hyp_keys.items()
        }
        candidates = {i: js for i, js in candidates.items() if js}
        if not candidates:
            return
        stage_pairs = _best_stage_alignment(
            sorted(candidates), candidates, pairs, len(ref_tokens)
        )
        for h, r in stage_pairs:
            pairs.append((h, r))
            matched_h.add(h)
            matched_r.add(r)

    run_stage(lambda tok: tok)
    run_stage(stem)

    if not pairs:
        return MeteorAlignment(pairs=[], chunks=0)
    return MeteorAlignment(pairs=sorted(pairs), chunks=_chunk_count(pairs))


def meteor_score(hyp, ref) -> float:
    """METEOR: F-mean weighted toward recall, discounted by fragmentation.

    score = F_mean * (1 - 0.5 * (chunks / matches)^3)  with
    F_mean = 10 P R / (R + 9 P).
    """
    hyp_tokens, ref_tokens = _tokens(hyp), _tokens(ref)
    if not hyp_tokens or not ref_tokens:
        return 0.0
    alignment = meteor_align(hyp_tokens, ref_tokens)
    m = alignment.matches
    if m == 0:
        return 0.0
    precision = m / len(hyp_tokens)
    recall = m / len(ref_tokens)
    f_mean = 10.0 * precision * recall / (recall + 9.0 * precision)
    penalty = 0.5 * (alignment.chunks / m) ** 3
    return f_mean * (1.0 - penalty)
