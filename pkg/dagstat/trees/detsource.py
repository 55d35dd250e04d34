#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 08, 2025
#
# Description: Deterministic split sources: the probability-one tree, its
# minimal DAG size, and the leaf-size sets of the quarter-split tree.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Set, Union

from dagstat.trees.sources import DeterministicSource, SplitRule, make_deterministic
from dagstat.trees.tree import LEAF, Tree

logger = logging.getLogger(__name__)

DetLike = Union[DeterministicSource, SplitRule]


@dataclass(frozen=True)
class LeafSizeSet:
    """Distinct subtree leaf-sizes of the quarter-split tree with ``n`` leaves."""

    n: int
    members: FrozenSet[int]

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class DetRow:
    n: int
    dag_size: int
    sqrt_n_ratio: float
    log2n_sq_ratio: float


def _as_source(kfn: DetLike) -> DeterministicSource:
    if isinstance(kfn, DeterministicSource):
        return kfn
    return make_deterministic(kfn)


def reachable_sizes(kfn: DetLike, n: int) -> Set[int]:
    """Leaf-sizes reachable from ``n`` under m -> {k(m), m - k(m)}."""
    if n < 1:
        raise ValueError(f"Number of leaves must be positive, got {n}")
    src = _as_source(kfn)
    seen = {n}
    stack = [n]
    while stack:
        m = stack.pop()
        if m < 2:
            continue
        k = src.split(m)
        for child in (k, m - k):
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return seen


def build_det_tree(kfn: DetLike, n: int) -> Tree:
    """The unique tree t_{sigma,n} with P_sigma(t) = 1.

    Subtrees of equal size are the same object, so the result is built in
    O(number of distinct sizes) even though it unfolds to 2n - 1 nodes.
    """
    src = _as_source(kfn)
    built: Dict[int, Tree] = {1: LEAF}
    for m in sorted(reachable_sizes(src, n)):
        if m >= 2:
            k = src.split(m)
            built[m] = Tree(built[k], built[m - k])
    return built[n]


def det_dag_size(kfn: DetLike, n: int) -> int:
    """D_sigma(n) = |D_{t_{sigma,n}}| without materializing the tree.

    Subtree structure is a function of subtree size, so the DAG has one node
    per reachable size.
    """
    size = len(reachable_sizes(kfn, n))
    logger.debug(f"Deterministic DAG size at n={n}: {size}")
    return size


def det_count_above(kfn: DetLike, n: int, b: int) -> int:
    """N(t_{sigma,n}, b) computed over distinct sizes."""
    src = _as_source(kfn)
    counts: Dict[int, int] = {}
    for m in sorted(reachable_sizes(src, n)):
        if m <= b:
            counts[m] = 0
        else:
            k = src.split(m)
            counts[m] = 1 + counts[k] + counts[m - k]
    return counts[n]


def _quarter_children(l: int, patched: bool) -> Iterable[int]:
    low, high = l // 4, (3 * l + 3) // 4
    if patched and low == 0 and l >= 2:
        # floor(l/4) = 0 is no split; the smallest legal split is used instead
        return (1, l - 1)
    return (low, high)


def leaf_size_set(n: int, patched: bool = True) -> LeafSizeSet:
    """L(n): union of L_1 = {n}, L_i = {floor(l/4), ceil(3l/4) : l in L_{i-1}}, minus 0.

    With ``patched`` the levels 2 and 3 split as (1, l - 1), matching the
    quarter source k(n) = max(1, floor(n/4)); without it they are fixed points.
    """
    if n < 1:
        raise ValueError(f"Number of leaves must be positive, got {n}")
    seen = {n}
    frontier = [n]
    while frontier:
        following: List[int] = []
        for l in frontier:
            if l <= 1:
                continue
            for child in _quarter_children(l, patched):
                if child not in seen:
                    seen.add(child)
                    following.append(child)
        frontier = following
    seen.discard(0)
    return LeafSizeSet(n=n, members=frozenset(seen))


def det_table(kfn: DetLike, n_list: Iterable[int]) -> List[DetRow]:
    """Rows n, dag_size, dag_size/sqrt(n), dag_size/log2(n)^2."""
    rows = []
    for n in n_list:
        size = det_dag_size(kfn, n)
        log_sq = math.log2(n) ** 2
        rows.append(DetRow(
            n=n,
            dag_size=size,
            sqrt_n_ratio=size / math.sqrt(n),
            log2n_sq_ratio=size / log_sq if log_sq > 0 else math.nan,
        ))
    return rows


def fit_constant(values: Dict[int, float], scale: Callable[[int], float]) -> float:
    """Smallest K with values[n] <= K * scale(n) for every given n."""
    if not values:
        raise ValueError("No values to fit")
    return max(value / scale(n) for n, value in values.items())
