#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 06, 2025
#
# Description: Expected number of nodes above a cut-point, by dynamic
# programming and by exhaustive enumeration, and the cut-point upper bound.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import math
from dataclasses import dataclass, field
from typing import IO, Callable, List, Sequence, Tuple

import numpy as np

from dagstat.errors import CapExceededError, RecurrenceMismatchError
from dagstat.trees.dag import dag_size
from dagstat.trees.sources import SplitSource, prob_of_tree
from dagstat.trees.tree import (
    DEFAULT_ENUMERATION_CAP,
    count_above,
    distinct_small_subtrees,
    enumerate_trees,
)
from dagstat.utils.helpers import write_csv

logger = logging.getLogger(__name__)

DEFAULT_DP_CAP = 20000
DEFAULT_TOLERANCE = 1e-9

RowFetcher = Callable[[int], np.ndarray]


@dataclass(frozen=True)
class ExpectTable:
    """E_{sigma,b}(m) for m = 1..n; ``values[0]`` is unused."""

    b: int
    n: int
    values: np.ndarray = field(repr=False)

    def __getitem__(self, m: int) -> float:
        if not 1 <= m <= self.n:
            raise IndexError(f"Level {m} outside 1..{self.n}")
        return float(self.values[m])

    def rows(self) -> List[Tuple[int, float]]:
        """(m, E) pairs in level order, as dumped to CSV."""
        return [(m, float(self.values[m])) for m in range(1, self.n + 1)]

    def to_csv(self, stream: IO[str], metadata: Sequence[str] = ()) -> None:
        write_csv(stream, ["m", "E"], self.rows(), metadata)


def cut_values(row_at: RowFetcher, b: int, n: int, tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Bottom-up evaluation of the cut-point recurrences.

    For b + 1 > m/2 only splits with the larger part above b contribute:
        E(m) = 1 + sum_{k=b+1}^{m-1} sigma*(k, m-k) E(k).
    Otherwise the middle band k = b+1..m-b-1 has both parts above b:
        E(m) = 1 + sum_{k=b+1}^{m-b-1} sigma(k, m-k)(E(k) + E(m-k))
                 + sum_{k=m-b}^{m-1} sigma*(k, m-k) E(k).
    At the boundary level m = 2(b + 1) the result is also checked against the
    unsymmetrised form 1 + sum_k sigma(k, m-k)(E(k) + E(m-k)).

    Args:
        row_at: Returns sigma(k, m - k) for k = 1..m-1 as a vector.
        b: Cut-point.
        n: Highest level.
        tolerance: Absolute (or relative, above 1) agreement at boundary levels.

    Returns:
        Array of length n + 1 with E(m) at index m.
    """
    values = np.zeros(n + 1)
    for m in range(b + 1, n + 1):
        row = row_at(m)
        # sigma*(k, m-k) for k != m/2; the diagonal never falls in a summed range
        sym = row + row[::-1]
        if 2 * (b + 1) > m:
            values[m] = 1.0 + float(np.dot(sym[b:m - 1], values[b + 1:m]))
            continue
        middle = float(np.dot(row[b:m - b - 1], values[b + 1:m - b] + values[m - b - 1:b:-1]))
        tail = float(np.dot(sym[m - b - 1:m - 1], values[m - b:m]))
        values[m] = 1.0 + middle + tail
        if 2 * (b + 1) == m:
            full = 1.0 + float(np.dot(row, values[1:m] + values[m - 1:0:-1]))
            # NaN on either side fails the check
            if not abs(full - values[m]) <= tolerance * max(1.0, abs(full)):
                raise RecurrenceMismatchError(m, b, float(values[m]), full,
                                              "banded vs unsymmetrised recurrence")
    return values


def _check_cap(what: str, n: int, cap: int) -> None:
    if n > cap:
        raise CapExceededError(what, n, cap)


def expected_cut_counts(src: SplitSource, b: int, n: int, cap: int = DEFAULT_DP_CAP,
                        tolerance: float = DEFAULT_TOLERANCE) -> ExpectTable:
    """Table of E_{sigma,b}(m), the expected number of nodes with more than ``b`` leaves.

    Args:
        src: Split source.
        b: Cut-point (at least 1).
        n: Highest level.
        cap: Largest admissible ``n``.
        tolerance: Boundary-level agreement tolerance.

    Returns:
        Expectation table for levels 1..n.
    """
    if b < 1:
        raise ValueError(f"Cut-point must be at least 1, got {b}")
    if n < 1:
        raise ValueError(f"Number of leaves must be positive, got {n}")
    _check_cap("DP", n, cap)
    logger.info(f"Computing E table for {src.spec}, b={b}, n={n}")
    values = cut_values(src.row, b, n, tolerance)
    values.setflags(write=False)
    return ExpectTable(b=b, n=n, values=values)


def exact_cut_expectation(src: SplitSource, b: int, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """E_{sigma,b}(n) as the enumeration sum of P_sigma(t) N(t, b)."""
    terms = []
    for t in enumerate_trees(n, cap):
        probability = prob_of_tree(src, t)
        if probability > 0.0:
            terms.append(probability * count_above(t, b))
    return math.fsum(terms)


def exact_dag_average(src: SplitSource, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """D_sigma(n) as the enumeration sum of P_sigma(t) |D_t|."""
    terms = []
    for t in enumerate_trees(n, cap):
        probability = prob_of_tree(src, t)
        if probability > 0.0:
            terms.append(probability * dag_size(t))
    return math.fsum(terms)


def exact_cut_max_small(src: SplitSource, b: int, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Largest S(t, b) over trees with positive probability."""
    return max(
        (distinct_small_subtrees(t, b) for t in enumerate_trees(n, cap) if prob_of_tree(src, t) > 0.0),
        default=0,
    )


def small_subtree_bound(b: int) -> float:
    """4^b / 3, which bounds sum_{k=0}^{b-1} C_k and hence S(t, b)."""
    return 4.0 ** b / 3.0


def cutpoint_upper_bound(src: SplitSource, b: int, n: int, cap: int = DEFAULT_DP_CAP) -> float:
    """E_{sigma,b}(n) + 4^b/3, an upper bound on D_sigma(n)."""
    if not 1 <= b <= n:
        raise ValueError(f"Cut-point must satisfy 1 <= b <= n, got b={b}, n={n}")
    return expected_cut_counts(src, b, n, cap)[n] + small_subtree_bound(b)
