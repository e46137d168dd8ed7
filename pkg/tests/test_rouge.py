import functools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlsum.rouge import best_reference, f_from_pr, lcs_length, rouge_l, rouge_l_multi


def lcs_oracle(a, b):
    """Memoised textbook recursion, independent of the iterative DP."""
    a, b = tuple(a), tuple(b)

    @functools.lru_cache(maxsize=None)
    def rec(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + rec(i + 1, j + 1)
        return max(rec(i + 1, j), rec(i, j + 1))

    return rec(0, 0)


class TestLcs:
    def test_hand_table(self):
        assert lcs_length(["the", "cat", "sat"], ["the", "cat", "ate"]) == 2

    def test_identity_and_empty(self):
        x = list("abcab")
        assert lcs_length(x, x) == 5
        assert lcs_length(x, []) == 0 and lcs_length([], x) == 0

    def test_non_contiguous(self):
        assert lcs_length(list("axbycz"), list("abc")) == 3

    def test_against_oracle(self):
        rng = random.Random(7)
        for _ in range(300):
            a = [rng.choice("abcd") for _ in range(rng.randint(0, 12))]
            b = [rng.choice("abcd") for _ in range(rng.randint(0, 12))]
            assert lcs_length(a, b) == lcs_oracle(a, b)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(0, 3), max_size=12), st.lists(st.integers(0, 3), max_size=12))
    def test_bounds_and_symmetry(self, a, b):
        n = lcs_length(a, b)
        assert 0 <= n <= min(len(a), len(b))
        assert n == lcs_length(b, a)


class TestRougeL:
    def test_identity(self):
        s = rouge_l(["a", "b"], ["a", "b"])
        assert (s.precision, s.recall, s.f_measure) == (1.0, 1.0, 1.0)

    def test_two_thirds(self):
        s = rouge_l(["the", "cat", "sat"], ["the", "cat", "ate"], beta=1.0)
        assert s.precision == pytest.approx(2 / 3, abs=1e-15)
        assert s.recall == pytest.approx(2 / 3, abs=1e-15)
        assert s.f_measure == pytest.approx(2 / 3, abs=1e-15)

    def test_empty_candidate(self):
        s = rouge_l([], ["a"])
        assert (s.precision, s.recall, s.f_measure) == (0.0, 0.0, 0.0)

    def test_asymmetric_lengths(self):
        # lcs=2, P=2/4, R=2/2, F1 = 2PR/(P+R) = 2/3; beta=2: 5PR/(R+4P) = 2.5/3
        s = rouge_l(list("abxy"), list("ab"), beta=1.0)
        assert (s.precision, s.recall) == (0.5, 1.0)
        assert s.f_measure == pytest.approx(2 / 3, rel=1e-14)
        assert rouge_l(list("abxy"), list("ab"), beta=2.0).f_measure == pytest.approx(2.5 / 3, rel=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0, 1), st.floats(0.1, 10))
    def test_equal_p_r_gives_f(self, p, beta):
        assert f_from_pr(p, p, beta) == p

    def test_bad_beta(self):
        with pytest.raises(ValueError):
            rouge_l(["a"], ["a"], beta=0)


class TestMulti:
    def test_singleton(self):
        c, r = list("abc"), list("abd")
        assert rouge_l_multi(c, [r]) == rouge_l(c, r).f_measure

    def test_matches_second_reference(self):
        c = list("xyz")
        assert rouge_l_multi(c, [list("abc"), c, list("xq")]) == 1.0

    def test_max_of_constructed_scores(self):
        cand = list("abcdefghij")
        ref_a = list("abcd")  # lcs 4: P=0.4, R=1 -> F = 0.8/1.4
        ref_b = list("abcdefg") + list("zzz")  # lcs 7: P=R=0.7 -> F=0.7
        assert rouge_l(cand, ref_a).f_measure == pytest.approx(0.8 / 1.4)
        assert rouge_l(cand, ref_b).f_measure == pytest.approx(0.7)
        assert rouge_l_multi(cand, [ref_a, ref_b]) == pytest.approx(0.7)
        assert best_reference(cand, [ref_a, ref_b]).recall == pytest.approx(0.7)

    def test_mean_aggregate(self):
        cand = list("ab")
        assert rouge_l_multi(cand, [cand, list("zz")], aggregate="mean") == 0.5

    def test_empty_references(self):
        with pytest.raises(ValueError):
            rouge_l_multi(["a"], [])

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(st.integers(0, 3), max_size=10),
        st.lists(st.lists(st.integers(0, 3), max_size=10), min_size=1, max_size=4),
        st.lists(st.integers(0, 3), max_size=10),
    )
    def test_monotone_and_bounded(self, cand, refs, extra):
        before = rouge_l_multi(cand, refs)
        after = rouge_l_multi(cand, refs + [extra])
        assert 0.0 <= before <= after <= 1.0
