from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from rtlocr import evaluate
from rtlocr.script import ScriptFilter


def levenshtein_oracle(a: str, b: str) -> int:
    """Independent recursive-with-memo implementation."""

    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            rec(i - 1, j) + 1,
            rec(i, j - 1) + 1,
            rec(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return rec(len(a), len(b))


short = st.text(alphabet="ابجد ab.", max_size=8)


class TestCharAccuracy:
    def test_exact_match(self):
        assert evaluate.char_accuracy("abc", "abc") == (0, 100.0)

    def test_single_substitution(self):
        dist, acc = evaluate.char_accuracy("abc", "abd")
        assert dist == 1
        assert acc == pytest.approx(100 * 2 / 3)

    def test_empty_reference_clamped(self):
        dist, acc = evaluate.char_accuracy("", "ab")
        assert dist == 2 and acc == 0.0

    def test_nfc_applied_both_sides(self):
        dist, acc = evaluate.char_accuracy("á", "á")
        assert dist == 0 and acc == 100.0

    @given(short, short)
    @settings(max_examples=500)
    def test_matches_oracle(self, a, b):
        assert evaluate.levenshtein(a, b) == levenshtein_oracle(a, b)

    @given(short, short)
    @settings(max_examples=200)
    def test_symmetry(self, a, b):
        assert evaluate.levenshtein(a, b) == evaluate.levenshtein(b, a)

    @given(short, short, short)
    @settings(max_examples=200)
    def test_triangle_inequality(self, a, b, c):
        assert evaluate.levenshtein(a, c) <= evaluate.levenshtein(a, b) + evaluate.levenshtein(b, c)

    @given(short, short)
    def test_zero_iff_equal(self, a, b):
        assert (evaluate.levenshtein(a, b) == 0) == (a == b)


class TestAlign:
    def test_substitution_preferred(self):
        pairs = evaluate.align("ab", "ac")
        assert ("b", "c") in pairs

    def test_indels_marked(self):
        pairs = evaluate.align("abc", "ac")
        assert ("b", evaluate.INSERTED) in pairs

    @given(short, short)
    @settings(max_examples=200)
    def test_alignment_cost_equals_distance(self, a, b):
        pairs = evaluate.align(a, b)
        cost = sum(1 for g, h in pairs if g != h)
        assert cost == evaluate.levenshtein(a, b)


class TestAggregation:
    def test_worked_example(self):
        # distances 1 and 1 over reference lengths 3 and 7 -> 1 - 2/10 = 80%
        report = evaluate.evaluate_pairs(
            [("l1", "abc", "abd"), ("l2", "abcdefg", "abcdefh")]
        )
        assert report.full_accuracy == pytest.approx(80.0)
        assert report.total_distance == 2
        assert report.total_gt_chars == 10

    def test_perfect(self):
        report = evaluate.evaluate_pairs([("l1", "اب", "اب"), ("l2", "جد", "جد")])
        assert report.full_accuracy == 100.0
        assert report.script_accuracy == 100.0

    def test_punctuation_only_errors(self):
        # script-only must hit 100 while full stays below: the headline metric gap
        report = evaluate.evaluate_pairs(
            [("l1", "ابجد .", "ابجد ،"), ("l2", "بجاد", "بجاد")]
        )
        assert report.script_accuracy == 100.0
        assert report.full_accuracy < 100.0

    def test_empty_dataset_null_accuracy(self):
        report = evaluate.evaluate_pairs([])
        assert report.full_accuracy is None
        assert report.script_accuracy is None
        assert report.lines == []

    def test_permutation_invariant(self):
        pairs = [("a", "ابج", "ابد"), ("b", "جد", "د"), ("c", "اب.", "اب")]
        r1 = evaluate.evaluate_pairs(pairs)
        r2 = evaluate.evaluate_pairs(list(reversed(pairs)))
        assert r1.full_accuracy == r2.full_accuracy
        assert r1.script_accuracy == r2.script_accuracy
        assert sorted((g, h, c) for g, h, c in r1.confusions) == sorted(
            (g, h, c) for g, h, c in r2.confusions
        )

    def test_aggregate_is_sum_of_line_distances(self):
        pairs = [("a", "ابج", "ابد"), ("b", "جد", "د")]
        report = evaluate.evaluate_pairs(pairs)
        assert report.total_distance == sum(r.distance for r in report.lines)

    def test_confusion_counts(self):
        report = evaluate.evaluate_pairs([("l", "اا", "اب")])
        assert ("ا", "ب", 1) in report.confusions


class TestFormatTable:
    def test_layout(self):
        text = evaluate.format_table([("m.korm", "ds", 97.56, 99.68), ("m2", "ds2", None, None)])
        lines = text.splitlines()
        assert "Script-only" in lines[0]
        assert "97.56" in lines[2] and "99.68" in lines[2]
        assert "n/a" in lines[3]
