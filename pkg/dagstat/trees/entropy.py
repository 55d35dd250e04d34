#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 07, 2025
#
# Description: Split entropies and the entropy of the tree source, computed
# from cut-point expectations and by enumeration.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import math
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from dagstat.errors import BoundsError, CapExceededError
from dagstat.trees.dag import field_width
from dagstat.trees.expectation import DEFAULT_TOLERANCE, cut_values, exact_dag_average
from dagstat.trees.sources import SplitSource, prob_of_tree
from dagstat.trees.tree import DEFAULT_ENUMERATION_CAP, enumerate_trees

logger = logging.getLogger(__name__)

DEFAULT_ENTROPY_CAP = 512


@dataclass(frozen=True)
class EntropyRow:
    j: int
    h_j: float
    e_prev: float  # E_{sigma,j-1}(n)
    e_j: float  # E_{sigma,j}(n)
    contribution: float


@dataclass(frozen=True)
class EntropyProfile:
    """Entropy H(X^n) in bits with its per-level decomposition."""

    n: int
    H: float
    rows: List[EntropyRow]

    @property
    def h(self) -> Dict[int, float]:
        return {row.j: row.h_j for row in self.rows}


def _entropy_bits(probabilities: np.ndarray) -> float:
    # 0 * log(1/0) is taken as 0
    positive = probabilities[probabilities > 0.0]
    return math.fsum((-positive * np.log2(positive)).tolist())


def split_entropy(src: SplitSource, k: int) -> float:
    """h_k(sigma): Shannon entropy in bits of the split distribution at level ``k``."""
    if k < 2:
        raise ValueError(f"Split level must be at least 2, got {k}")
    return max(0.0, _entropy_bits(src.row(k)))


def entropy_profile(src: SplitSource, n: int, cap: int = DEFAULT_ENTROPY_CAP,
                    tolerance: float = DEFAULT_TOLERANCE) -> EntropyProfile:
    """H(X^n) = sum_{j=2}^n (E_{sigma,j-1}(n) - E_{sigma,j}(n)) h_j(sigma).

    One DP table is evaluated per cut-point j; the sigma rows are fetched once
    and shared by all of them. Cost grows as n^3, hence the cap.
    """
    if n < 1:
        raise ValueError(f"Number of leaves must be positive, got {n}")
    if n > cap:
        raise CapExceededError("entropy", n, cap)
    logger.info(f"Computing source entropy for {src.spec}, n={n}")
    rows_by_level = {m: src.row(m) for m in range(2, n + 1)}
    h = {m: max(0.0, _entropy_bits(row)) for m, row in rows_by_level.items()}

    # e_top[j] = E_{sigma,j}(n); E_{sigma,n}(n) = 0
    e_top = [0.0] * (n + 1)
    for j in range(1, n):
        e_top[j] = float(cut_values(rows_by_level.__getitem__, j, n, tolerance)[n])

    rows = []
    for j in range(2, n + 1):
        contribution = (e_top[j - 1] - e_top[j]) * h[j]
        rows.append(EntropyRow(j=j, h_j=h[j], e_prev=e_top[j - 1], e_j=e_top[j],
                               contribution=contribution))
    total = math.fsum(row.contribution for row in rows)
    return EntropyProfile(n=n, H=max(0.0, total), rows=rows)


def source_entropy(src: SplitSource, n: int, cap: int = DEFAULT_ENTROPY_CAP) -> float:
    """H(X_sigma^n) in bits via the cut-point expectation identity."""
    return entropy_profile(src, n, cap).H


def brute_entropy(src: SplitSource, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """H(X_sigma^n) in bits summed over all trees with ``n`` leaves."""
    terms = []
    for t in enumerate_trees(n, cap):
        probability = prob_of_tree(src, t)
        if probability > 0.0:
            terms.append(-probability * math.log2(probability))
    return max(0.0, math.fsum(terms))


def entropy_lower_bound(rho: float, n_sigma: int, n: int) -> float:
    """log(1/rho) * n / (4 N_sigma - 4), a lower bound on H(X^n) for n >= N_sigma."""
    if not 0.0 < rho <= 1.0:
        raise BoundsError(f"rho must lie in (0, 1], got {rho}")
    if n_sigma < 2:
        raise BoundsError(f"N_sigma must be at least 2, got {n_sigma}")
    if n < n_sigma:
        raise BoundsError(f"Bound requires n >= N_sigma, got n={n}, N_sigma={n_sigma}")
    return math.log2(1.0 / rho) * n / (4 * n_sigma - 4)


def coding_bound(src: SplitSource, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """2 ceil(log(2n - 1)) D_sigma(n), the code length that dominates H(X^n)."""
    return 2 * field_width(n) * exact_dag_average(src, n, cap)
