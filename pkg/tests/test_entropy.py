import math

import pytest

from dagstat.errors import BoundsError, CapExceededError
from dagstat.trees.entropy import (
    brute_entropy,
    coding_bound,
    entropy_lower_bound,
    entropy_profile,
    source_entropy,
    split_entropy,
)
from dagstat.trees.bounds import fit_rho
from dagstat.trees.sources import BinomialSource, BstSource, parse_source


class TestSplitEntropy:
    def test_uniform_split(self):
        assert split_entropy(BstSource(), 5) == pytest.approx(2.0)

    def test_deterministic_split(self):
        assert split_entropy(parse_source("det:quarter"), 9) == 0.0

    def test_level_range(self):
        with pytest.raises(ValueError):
            split_entropy(BstSource(), 1)

    def test_bounded_by_uniform_split(self, any_source):
        for k in range(2, 300):
            assert split_entropy(any_source, k) <= math.log2(k - 1) + 1e-12


class TestSourceEntropy:
    def test_bst_three_leaves(self):
        assert source_entropy(BstSource(), 3) == pytest.approx(1.0, abs=1e-12)

    def test_uniform_catalan_four_leaves(self, catalan_source):
        assert source_entropy(catalan_source, 4) == pytest.approx(math.log2(5), abs=1e-12)

    def test_trivial_levels(self, any_source):
        assert source_entropy(any_source, 1) == 0.0
        assert source_entropy(any_source, 2) == 0.0

    @pytest.mark.parametrize("n", range(1, 11))
    def test_matches_enumeration(self, any_source, n):
        identity = source_entropy(any_source, n)
        brute = brute_entropy(any_source, n)
        assert identity == pytest.approx(brute, rel=1e-8, abs=1e-12)

    def test_deterministic_source_has_no_entropy(self):
        assert source_entropy(parse_source("det:quarter"), 60) == pytest.approx(0.0, abs=1e-12)

    def test_profile_rows(self):
        profile = entropy_profile(BinomialSource(0.3), 8)
        assert [row.j for row in profile.rows] == list(range(2, 9))
        assert profile.rows[-1].e_j == 0.0
        assert math.fsum(row.contribution for row in profile.rows) == pytest.approx(profile.H)
        assert profile.h[2] == 0.0

    def test_cap(self):
        with pytest.raises(CapExceededError):
            entropy_profile(BstSource(), 600)
        with pytest.raises(CapExceededError):
            entropy_profile(BstSource(), 20, cap=10)

    def test_dominated_by_coding_bound(self, any_source):
        for n in range(2, 9):
            assert source_entropy(any_source, n) <= coding_bound(any_source, n) + 1e-9


class TestEntropyLowerBound:
    def test_value(self):
        assert entropy_lower_bound(0.5, 3, 16) == pytest.approx(16 / 8)

    def test_holds_for_bst(self):
        for n in range(3, 40):
            assert entropy_lower_bound(0.5, 3, n) <= source_entropy(BstSource(), n) + 1e-12

    @pytest.mark.parametrize("n", [50, 200])
    def test_holds_for_bst_at_larger_sizes(self, n):
        assert entropy_lower_bound(0.5, 3, n) <= source_entropy(BstSource(), n)

    @pytest.mark.parametrize("n", [50, 200])
    def test_holds_for_binomial_with_fitted_constants(self, n):
        src = BinomialSource(0.5)
        rho, n_rho = fit_rho(src, 2, 256)
        assert (rho, n_rho) == (pytest.approx(0.5), 3)
        assert entropy_lower_bound(rho, n_rho, n) <= source_entropy(src, n)

    @pytest.mark.parametrize("rho, n_sigma, n", [(0.0, 3, 5), (1.5, 3, 5), (0.5, 1, 5), (0.5, 6, 5)])
    def test_rejects(self, rho, n_sigma, n):
        with pytest.raises(BoundsError):
            entropy_lower_bound(rho, n_sigma, n)
