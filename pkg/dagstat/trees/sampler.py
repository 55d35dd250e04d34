#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 05, 2025
#
# Description: Seeded generation of random trees from a split source and
# Monte Carlo estimation of the average minimal DAG size.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from pydantic import BaseModel

from dagstat.trees.sources import SplitSource
from dagstat.trees.tree import LEAF, Tree

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
DEFAULT_Z = 1.96

T = TypeVar("T")


class RandomStream:
    """Deterministic 64-bit seeded random stream (PCG64) with buffered uniforms."""

    BLOCK = 4096

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._rng = np.random.Generator(np.random.PCG64(self.seed))
        self._block: List[float] = []
        self._index = 0

    def uniform(self) -> float:
        """Next uniform draw in [0, 1)."""
        if self._index >= len(self._block):
            self._block = self._rng.random(self.BLOCK).tolist()
            self._index = 0
        u = self._block[self._index]
        self._index += 1
        return u

    def binomial(self, trials: int, p: float) -> int:
        return int(self._rng.binomial(trials, p))


def mix64(x: int) -> int:
    """splitmix64 finalizer."""
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def replicate_seed(master: int, index: int) -> int:
    """Seed of replicate ``index`` derived from the master seed."""
    return mix64((master & MASK64) ^ mix64(index))


class EstimateReport(BaseModel):
    """Monte Carlo summary of the minimal DAG size."""

    source: str
    n: int
    reps: int
    seed: int
    mean: float
    stderr: float
    ci95: Tuple[float, float]


def sample_split(src: SplitSource, n: int, rng: RandomStream) -> int:
    """Draw a split k in 1..n-1 with probability sigma(k, n - k)."""
    src.check_level(n)
    return src.sample_split(n, rng)


def _grow(src: SplitSource, n: int, rng: RandomStream, leaf: T, join: Callable[[T, T], T]) -> T:
    """Generate a tree top-down, combining completed subtrees with ``join``.

    Splits are drawn in preorder (node, then its whole left subtree, then its
    right subtree), so every ``join`` sees the same random stream.
    """
    if n < 1:
        raise ValueError(f"Number of leaves must be positive, got {n}")
    values: List[T] = []
    # Positive entries are pending subtree sizes, 0 marks a pending join
    work = [n]
    while work:
        size = work.pop()
        if size == 0:
            right = values.pop()
            left = values.pop()
            values.append(join(left, right))
        elif size == 1:
            values.append(leaf)
        else:
            k = src.sample_split(size, rng)
            work.append(0)
            work.append(size - k)
            work.append(k)
    return values[0]


def sample_tree(src: SplitSource, n: int, rng: RandomStream) -> Tree:
    """Draw a tree with ``n`` leaves distributed according to P_sigma."""
    return _grow(src, n, rng, LEAF, Tree)


def sample_dag_size(src: SplitSource, n: int, rng: RandomStream) -> int:
    """Minimal DAG size of a P_sigma-random tree, hash-consed during generation.

    Consumes the random stream exactly like :func:`sample_tree`, so both agree
    on the same seed; the tree itself is never stored.
    """
    table: Dict[Tuple[int, int], int] = {}

    def join(left: int, right: int) -> int:
        pair = (left, right)
        node_id = table.get(pair)
        if node_id is None:
            node_id = len(table) + 1
            table[pair] = node_id
        return node_id

    _grow(src, n, rng, 0, join)
    return len(table) + 1


def _replicate_chunk(src: SplitSource, n: int, seed: int, start: int, stop: int) -> List[int]:
    return [sample_dag_size(src, n, RandomStream(replicate_seed(seed, index)))
            for index in range(start, stop)]


# Per-process source, installed once by the pool initializer
_worker_source: Optional[SplitSource] = None


def _install_source(src: SplitSource) -> None:
    global _worker_source
    _worker_source = src


def _worker_chunk(n: int, seed: int, start: int, stop: int) -> List[int]:
    if _worker_source is None:
        raise RuntimeError("Worker started without a source")
    return _replicate_chunk(_worker_source, n, seed, start, stop)


def _chunks(reps: int, workers: int) -> List[Tuple[int, int]]:
    size = max(1, math.ceil(reps / (workers * 4)))
    return [(start, min(reps, start + size)) for start in range(0, reps, size)]


def summarize(values: Sequence[float], z: float = DEFAULT_Z) -> Tuple[float, float, Tuple[float, float]]:
    """Mean, standard error and normal-approximation confidence interval.

    Sums are exactly rounded (``math.fsum``), so the result does not depend on
    the order in which replicates finished.
    """
    count = len(values)
    if count < 2:
        raise ValueError(f"At least two values are needed, got {count}")
    mean = math.fsum(values) / count
    variance = math.fsum((x - mean) ** 2 for x in values) / (count - 1)
    stderr = math.sqrt(variance / count)
    return mean, stderr, (mean - z * stderr, mean + z * stderr)


def sample_dag_sizes(src: SplitSource, n: int, reps: int, seed: int, workers: int = 1) -> List[int]:
    """DAG sizes of ``reps`` independent replicates, in replicate order."""
    if workers <= 1 or reps < 2:
        return _replicate_chunk(src, n, seed, 0, reps)
    chunks = _chunks(reps, workers)
    sizes: List[int] = []
    # Large sources (the Catalan table) are pickled once per worker, not per chunk
    with ProcessPoolExecutor(max_workers=workers, initializer=_install_source, initargs=(src,)) as pool:
        futures = [pool.submit(_worker_chunk, n, seed, start, stop) for start, stop in chunks]
        for future in futures:
            sizes.extend(future.result())
    return sizes


def estimate_dag_size(src: SplitSource, n: int, reps: int, seed: int,
                      workers: int = 1, z: float = DEFAULT_Z) -> EstimateReport:
    """Monte Carlo estimate of the average minimal DAG size D_sigma(n).

    Args:
        src: Split source.
        n: Number of leaves.
        reps: Number of replicates (at least 2).
        seed: Master seed; replicate seeds are derived from it.
        workers: Worker processes; the report does not depend on this value.
        z: Normal quantile for the confidence interval.

    Returns:
        Estimate report.
    """
    if reps < 2:
        raise ValueError(f"At least two replicates are needed, got {reps}")
    logger.info(f"Estimating DAG size for {src.spec}, n={n}, reps={reps}, seed={seed}, workers={workers}")
    sizes = sample_dag_sizes(src, n, reps, seed, workers)
    mean, stderr, ci95 = summarize(sizes, z)
    return EstimateReport(source=src.spec, n=n, reps=reps, seed=seed,
                          mean=mean, stderr=stderr, ci95=ci95)
