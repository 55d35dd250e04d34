import io
import math

import numpy as np
import pytest

from dagstat.errors import CapExceededError, RecurrenceMismatchError
from dagstat.trees.dag import dag_size
from dagstat.trees.expectation import (
    cut_values,
    cutpoint_upper_bound,
    exact_cut_expectation,
    exact_cut_max_small,
    exact_dag_average,
    expected_cut_counts,
    small_subtree_bound,
)
from dagstat.trees.sources import BstSource, CatalanSource, parse_source
from dagstat.trees.tree import count_above, enumerate_trees


class TestCutCounts:
    def test_bst_small_value(self):
        table = expected_cut_counts(BstSource(), 2, 4)
        assert table[4] == pytest.approx(5.0 / 3.0)
        assert table[1] == table[2] == 0.0
        assert table[3] == 1.0

    def test_below_cut_point_is_zero(self, any_source):
        table = expected_cut_counts(any_source, 5, 5)
        assert all(table[m] == 0.0 for m in range(1, 6))

    def test_single_level_above(self, any_source):
        assert expected_cut_counts(any_source, 3, 4)[4] == 1.0

    @pytest.mark.parametrize("b", [1, 2, 3])
    def test_matches_enumeration(self, any_source, b):
        table = expected_cut_counts(any_source, b, 10)
        for n in range(1, 11):
            assert table[n] == pytest.approx(exact_cut_expectation(any_source, b, n), abs=1e-9)

    def test_b1_counts_every_internal_node(self, any_source):
        table = expected_cut_counts(any_source, 1, 50)
        for n in range(1, 51):
            assert table[n] == pytest.approx(n - 1, abs=1e-9)

    def test_rows_and_csv(self):
        table = expected_cut_counts(BstSource(), 2, 4)
        assert [m for m, _ in table.rows()] == [1, 2, 3, 4]
        stream = io.StringIO()
        table.to_csv(stream)
        assert stream.getvalue().splitlines()[-1] == "4,1.6666666667"

    def test_table_is_read_only(self):
        table = expected_cut_counts(BstSource(), 1, 5)
        with pytest.raises(ValueError):
            table.values[3] = 0.0

    def test_index_range(self):
        table = expected_cut_counts(BstSource(), 1, 5)
        with pytest.raises(IndexError):
            table[6]

    def test_cap(self):
        with pytest.raises(CapExceededError):
            expected_cut_counts(BstSource(), 2, 101, cap=100)

    @pytest.mark.parametrize("b, n", [(0, 5), (1, 0)])
    def test_rejects_bad_arguments(self, b, n):
        with pytest.raises(ValueError):
            expected_cut_counts(BstSource(), b, n)

    def test_boundary_check_catches_asymmetric_rows(self):
        def broken(m):
            return np.full(m - 1, np.nan)

        with pytest.raises(RecurrenceMismatchError):
            cut_values(broken, 1, 4)


class TestCountBounds:
    @pytest.mark.parametrize("spec", ["bst", "binomial:p=0.3", "det:quarter", "det:half"])
    def test_lower_bound(self, spec):
        src = parse_source(spec)
        n = 2000
        for b in (2, 5, 20):
            table = expected_cut_counts(src, b, n)
            for m in range(b + 1, n + 1, 37):
                assert table[m] >= m / (4 * b) - 1e-9

    def test_bst_upper_bounds(self):
        src = BstSource()
        n = 10000
        for b in (4, 8, 16):
            table = expected_cut_counts(src, b, n)
            psi = 2.0 / (b - 1)
            for m in range(b + 1, n + 1, 101):
                assert table[m] <= 4 * m * psi - 2 + 1e-9
                assert table[m] <= 8 * m / b - 2 + 1e-9

    def test_catalan_lower_bound(self, catalan_source):
        table = expected_cut_counts(catalan_source, 3, 1500)
        for m in range(4, 1501, 29):
            assert table[m] >= m / 12 - 1e-9


class TestCutPointInequality:
    @pytest.mark.parametrize("b", [1, 2, 3])
    def test_exact_dag_average_is_bounded(self, any_source, b):
        for n in range(max(2, b), 9):
            exact = exact_dag_average(any_source, n)
            assert exact <= cutpoint_upper_bound(any_source, b, n) + 1e-9

    @pytest.mark.parametrize("b", [1, 2, 3])
    def test_small_subtree_term(self, any_source, b):
        for n in range(2, 9):
            assert exact_cut_max_small(any_source, b, n) <= small_subtree_bound(b)

    def test_per_tree_decomposition(self):
        for t in enumerate_trees(7):
            for b in (1, 2, 3):
                assert dag_size(t) <= count_above(t, b) + small_subtree_bound(b)

    def test_small_subtree_bound_values(self):
        assert small_subtree_bound(1) == pytest.approx(4 / 3)
        assert small_subtree_bound(3) == pytest.approx(64 / 3)
        # 4^b / 3 dominates sum_{k < b} C_k
        assert all(small_subtree_bound(b) >= math.fsum(
            math.comb(2 * k, k) / (k + 1) for k in range(b)) for b in range(1, 12))

    def test_cutpoint_argument_range(self):
        with pytest.raises(ValueError):
            cutpoint_upper_bound(BstSource(), 5, 4)


@pytest.mark.slow
@pytest.mark.parametrize("spec", ["bst", "binomial:p=0.3", "binomial:p=0.5", "catalan", "det:quarter"])
@pytest.mark.parametrize("b", [2, 5, 20])
def test_count_lower_bound_up_to_ten_thousand(spec, b):
    n = 10 ** 4
    src = CatalanSource(n) if spec == "catalan" else parse_source(spec)
    table = expected_cut_counts(src, b, n)
    for m in range(b + 1, n + 1):
        assert table[m] >= m / (4 * b) - 1e-9
