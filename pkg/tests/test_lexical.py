import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from titlegauge.lexical import (
    MeteorAlignment,
    PrfScore,
    lcs_length,
    meteor_align,
    meteor_score,
    rouge_l,
    rouge_n,
)
from titlegauge.stemmer import stem


def lcs_bruteforce(a, b):
    """Enumerate every subsequence of the shorter list; independent oracle."""
    short, long_ = (a, b) if len(a) <= len(b) else (b, a)
    best = 0
    for mask in range(1 << len(short)):
        sub = [short[i] for i in range(len(short)) if mask >> i & 1]
        if len(sub) <= best:
            continue
        it = iter(long_)
        if all(tok in it for tok in sub):
            best = len(sub)
    return best


def enumerate_alignments(hyp, ref, pred):
    """All maximal one-to-one alignments under pred; independent of the search code."""
    candidates = [[j for j, r in enumerate(ref) if pred(h, r)] for h in hyp]

    def extend(i, taken):
        if i == len(hyp):
            yield []
            return
        for rest in extend(i + 1, taken):
            yield rest
        for j in candidates[i]:
            if j not in taken:
                taken.add(j)
                for rest in extend(i + 1, taken):
                    yield [(i, j)] + rest
                taken.remove(j)

    alignments = list(extend(0, set()))
    best = max(len(al) for al in alignments)
    return [al for al in alignments if len(al) == best]


def chunk_count(pairs):
    ordered = sorted(pairs)
    chunks = 0
    prev = None
    for h, r in ordered:
        if prev is None or h != prev[0] + 1 or r != prev[1] + 1:
            chunks += 1
        prev = (h, r)
    return chunks


class TestLcs:
    def test_swap_example(self):
        assert lcs_length(["a", "b", "c", "d"], ["a", "c", "b", "d"]) == 3

    def test_identity(self):
        x = ["t1", "t2", "t3", "t4", "t5"]
        assert lcs_length(x, x) == len(x)

    def test_disjoint(self):
        assert lcs_length(["a", "b"], ["c", "d"]) == 0

    def test_matches_bruteforce(self):
        rng = random.Random(13)
        vocab = ["a", "b", "c", "d", "e"]
        for _ in range(200):
            a = [rng.choice(vocab) for _ in range(rng.randint(0, 8))]
            b = [rng.choice(vocab) for _ in range(rng.randint(0, 8))]
            assert lcs_length(a, b) == lcs_bruteforce(a, b)

    @given(
        st.lists(st.sampled_from("abc"), max_size=8),
        st.lists(st.sampled_from("abc"), max_size=8),
        st.lists(st.sampled_from("abc"), max_size=4),
    )
    def test_bounded_and_monotone_under_shared_suffix(self, a, b, suffix):
        base = lcs_length(a, b)
        assert base <= min(len(a), len(b))
        assert lcs_length(a + suffix, b + suffix) == base + len(suffix)


class TestRougeN:
    def test_unigram_example(self):
        score = rouge_n(["a", "b", "c"], ["a", "c", "d"], 1)
        assert score.precision == pytest.approx(2 / 3)
        assert score.recall == pytest.approx(2 / 3)
        assert score.f1 == pytest.approx(2 / 3)

    def test_identity_bigrams(self):
        x = ["t1", "t2", "t3", "t4", "t5"]
        assert rouge_n(x, x, 2).f1 == 1.0

    def test_hyp_without_bigrams(self):
        assert rouge_n(["a"], ["a", "b", "c", "d", "e"], 2) == PrfScore(0.0, 0.0, 0.0)

    def test_clipped_multiset_overlap(self):
        score = rouge_n(["a", "a", "b"], ["a", "c"], 1)
        assert score.precision == pytest.approx(1 / 3)
        assert score.recall == pytest.approx(1 / 2)

    @given(
        st.lists(st.sampled_from("abcd"), min_size=1, max_size=8),
        st.lists(st.sampled_from("abcd"), min_size=1, max_size=8),
    )
    def test_swap_exchanges_precision_recall(self, hyp, ref):
        fwd = rouge_n(hyp, ref, 1)
        rev = rouge_n(ref, hyp, 1)
        assert fwd.precision == pytest.approx(rev.recall)
        assert fwd.recall == pytest.approx(rev.precision)
        assert fwd.f1 == pytest.approx(rev.f1)


class TestRougeL:
    def test_swap_example(self):
        score = rouge_l(["a", "b", "c", "d"], ["a", "c", "b", "d"])
        assert score.precision == pytest.approx(3 / 4)
        assert score.recall == pytest.approx(3 / 4)
        assert score.f1 == pytest.approx(3 / 4)

    def test_identity(self):
        x = ["u", "v", "w"]
        assert rouge_l(x, x).f1 == 1.0

    def test_disjoint(self):
        assert rouge_l(["a"], ["b"]).f1 == 0.0


class TestMeteorAlign:
    def test_identity(self):
        alignment = meteor_align(["a", "b", "c"], ["a", "b", "c"])
        assert alignment.matches == 3
        assert alignment.chunks == 1

    def test_rotated(self):
        alignment = meteor_align(["c", "a", "b"], ["a", "b", "c"])
        assert alignment.matches == 3
        assert alignment.chunks == 2

    def test_stem_stage(self):
        alignment = meteor_align(["titles"], ["title"])
        assert alignment.matches == 1
        assert alignment.chunks == 1

    def test_exact_stage_runs_before_stem_stage(self):
        # "title" could stem-match either ref token; the exact stage must
        # claim it first, leaving the stem stage for "generating".
        alignment = meteor_align(["title", "generating"], ["title", "generation"])
        assert alignment.matches == 2
        assert alignment.chunks == 1

    def test_empty(self):
        assert meteor_align([], ["a"]) == MeteorAlignment(pairs=[], chunks=0)

    def test_exhaustive_oracle_exact_stage(self):
        rng = random.Random(29)
        vocab = ["a", "b", "c"]
        for _ in range(150):
            hyp = [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
            ref = [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
            got = meteor_align(hyp, ref)
            # Stage oracle: exact stage on everything, then stem stage (a
            # no-op on this vocabulary), minimizing chunks over all maximum
            # one-to-one alignments.
            best = enumerate_alignments(hyp, ref, lambda h, r: h == r)
            if not best or not best[0]:
                assert got.matches == 0
                continue
            want_chunks = min(chunk_count(al) for al in best)
            assert got.matches == len(best[0])
            assert got.chunks == want_chunks

    def test_exhaustive_oracle_with_stem_stage(self):
        rng = random.Random(31)
        vocab = ["title", "titles", "model", "models", "a"]
        for _ in range(60):
            hyp = [rng.choice(vocab) for _ in range(rng.randint(1, 5))]
            ref = [rng.choice(vocab) for _ in range(rng.randint(1, 5))]
            got = meteor_align(hyp, ref)
            exact_best = enumerate_alignments(hyp, ref, lambda h, r: h == r)
            exact = min(exact_best, key=lambda al: (chunk_count(al), sorted(al)))
            taken_h = {i for i, _ in exact}
            taken_r = {j for _, j in exact}
            rest_h = [i for i in range(len(hyp)) if i not in taken_h]
            rest_r = [j for j in range(len(ref)) if j not in taken_r]
            stem_best = enumerate_alignments(
                [hyp[i] for i in rest_h],
                [ref[j] for j in rest_r],
                lambda h, r: stem(h) == stem(r),
            )
            m_expected = len(exact) + (len(stem_best[0]) if stem_best else 0)
            assert got.matches == m_expected

    def test_chunks_bounded_by_matches(self):
        rng = random.Random(37)
        for _ in range(100):
            hyp = [rng.choice("abcd") for _ in range(rng.randint(1, 7))]
            ref = [rng.choice("abcd") for _ in range(rng.randint(1, 7))]
            alignment = meteor_align(hyp, ref)
            if alignment.matches:
                assert 1 <= alignment.chunks <= alignment.matches


class TestMeteorScore:
    def test_identity_three_tokens(self):
        assert meteor_score(["a", "b", "c"], ["a", "b", "c"]) == pytest.approx(
            1 - 1 / 54, abs=1e-12
        )

    def test_no_matches(self):
        assert meteor_score(["a", "b"], ["c", "d"]) == 0.0

    def test_identical_single_token(self):
        assert meteor_score(["x"], ["x"]) == pytest.approx(0.5, abs=1e-12)

    def test_formula_on_rotated_example(self):
        # 3 matches in 2 chunks: F_mean = 1, penalty = 0.5 * (2/3)^3.
        assert meteor_score(["c", "a", "b"], ["a", "b", "c"]) == pytest.approx(
            1 - 0.5 * (2 / 3) ** 3, abs=1e-12
        )

    @given(
        st.lists(st.sampled_from("abcde"), min_size=1, max_size=8),
        st.lists(st.sampled_from("abcde"), min_size=1, max_size=8),
    )
    @settings(max_examples=150)
    def test_bounded(self, hyp, ref):
        assert 0.0 <= meteor_score(hyp, ref) <= 1.0
