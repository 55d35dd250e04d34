#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 04, 2025
#
# Description: Leaf-centric split sources: the split function sigma, its
# symmetrisation, tree probabilities and the built-in source models.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import csv
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import TYPE_CHECKING, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel
from scipy.stats import binom

from dagstat.errors import SourceError
from dagstat.trees.tree import Tree

if TYPE_CHECKING:
    from dagstat.trees.sampler import RandomStream

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-9
DEFAULT_CATALAN_LEVELS = 2 ** 20

SplitRule = Callable[[int], int]


class SplitSource(ABC):
    """A split function sigma on pairs (i, n - i).

    Subclasses are immutable after construction and safe to share.
    """

    name: str = "source"
    n_max: Optional[int] = None  # None means every level is defined

    @property
    def spec(self) -> str:
        """Source spec in the CLI mini-language."""
        return self.name

    def check_level(self, n: int) -> None:
        if n < 2:
            raise SourceError(f"Split level must be at least 2, got {n}")
        if self.n_max is not None and n > self.n_max:
            raise SourceError(f"Source {self.spec} is only defined up to n={self.n_max}, queried n={n}")

    def sigma(self, i: int, j: int) -> float:
        """sigma(i, j) for leaf counts i, j >= 1."""
        if i < 1 or j < 1:
            raise SourceError(f"Split sizes must be positive, got ({i}, {j})")
        self.check_level(i + j)
        return self._sigma(i, i + j)

    def row(self, n: int) -> np.ndarray:
        """Vector of sigma(k, n - k) for k = 1..n-1."""
        self.check_level(n)
        return self._row(n)

    @abstractmethod
    def _sigma(self, k: int, n: int) -> float:
        ...

    @abstractmethod
    def _row(self, n: int) -> np.ndarray:
        ...

    @abstractmethod
    def sample_split(self, n: int, stream: "RandomStream") -> int:
        """Draw the left leaf count k in 1..n-1 distributed as sigma(k, n - k)."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec!r})"


class BstSource(SplitSource):
    """Binary search tree model: sigma(k, n - k) = 1/(n - 1)."""

    name = "bst"

    def _sigma(self, k: int, n: int) -> float:
        return 1.0 / (n - 1)

    def _row(self, n: int) -> np.ndarray:
        return np.full(n - 1, 1.0 / (n - 1))

    def sample_split(self, n: int, stream: "RandomStream") -> int:
        if n == 2:
            return 1
        return min(n - 1, 1 + int(stream.uniform() * (n - 1)))


class BinomialSource(SplitSource):
    """Binomial random tree model: k = 1 + Binomial(n - 2, p)."""

    name = "binomial"

    def __init__(self, p: float):
        if not 0.0 < p < 1.0:
            raise SourceError(f"Binomial parameter must lie in (0, 1), got {p}")
        self.p = float(p)

    @property
    def spec(self) -> str:
        return f"binomial:p={self.p:g}"

    def _sigma(self, k: int, n: int) -> float:
        return float(binom.pmf(k - 1, n - 2, self.p))

    def _row(self, n: int) -> np.ndarray:
        return binom.pmf(np.arange(n - 1), n - 2, self.p)

    def sample_split(self, n: int, stream: "RandomStream") -> int:
        if n == 2:
            return 1
        return 1 + stream.binomial(n - 2, self.p)


@lru_cache(maxsize=4)
def log_catalan_table(levels: int) -> np.ndarray:
    """ln C_i for i = 0..levels-1 via C_i = C_{i-1} * 2(2i - 1)/(i + 1).

    The running sum is Neumaier-compensated so differences of table entries
    stay accurate to about 1e-12 relative. Tables are cached per length and
    returned read-only, so sources of the same length share one table.
    """
    steps = np.arange(1, levels, dtype=np.float64)
    increments = np.log(2.0 * (2.0 * steps - 1.0) / (steps + 1.0)).tolist()
    table = [0.0] * levels
    total = 0.0
    compensation = 0.0
    for i, x in enumerate(increments, start=1):
        t = total + x
        if abs(total) >= abs(x):
            compensation += (total - t) + x
        else:
            compensation += (x - t) + total
        total = t
        table[i] = total + compensation
    result = np.asarray(table)
    result.setflags(write=False)
    return result


class CatalanSource(SplitSource):
    """Uniform distribution on trees: sigma(k, n-k) = C_{k-1} C_{n-k-1} / C_{n-1}."""

    name = "catalan"

    def __init__(self, levels: int = DEFAULT_CATALAN_LEVELS):
        if levels < 2:
            raise SourceError(f"Catalan table must cover at least 2 levels, got {levels}")
        # Built eagerly so the source is read-only once constructed
        self._log_catalan = log_catalan_table(levels)
        self.n_max = levels
        logger.debug(f"Built ln-Catalan table for {levels} levels")

    def _sigma(self, k: int, n: int) -> float:
        lc = self._log_catalan
        return math.exp(lc[k - 1] + lc[n - k - 1] - lc[n - 1])

    def _row(self, n: int) -> np.ndarray:
        lc = self._log_catalan
        return np.exp(lc[0:n - 1] + lc[n - 2::-1][:n - 1] - lc[n - 1])

    def sample_split(self, n: int, stream: "RandomStream") -> int:
        self.check_level(n)
        # Mass concentrates at extreme splits, so scan inward from both ends
        u = stream.uniform()
        cumulative = 0.0
        lo, hi = 1, n - 1
        k = 1
        while lo <= hi:
            k = lo
            cumulative += self._sigma(k, n)
            if u < cumulative:
                return k
            if hi != lo:
                k = hi
                cumulative += self._sigma(k, n)
                if u < cumulative:
                    return k
            lo += 1
            hi -= 1
        return k


def quarter_split(n: int) -> int:
    """k(n) = max(1, floor(n/4)); floor(n/4) alone is no split for n in {2, 3}."""
    return max(1, n // 4)


def half_split(n: int) -> int:
    """k(n) = floor(n/2); yields perfect trees at powers of two."""
    return n // 2


def comb_split(n: int) -> int:
    """k(n) = 1; yields path-shaped trees."""
    return 1


DETERMINISTIC_RULES: Dict[str, SplitRule] = {
    "quarter": quarter_split,
    "half": half_split,
    "comb": comb_split,
}


class DeterministicSource(SplitSource):
    """0/1-valued source with a single split k(n) per level."""

    def __init__(self, k_fn: SplitRule, name: Optional[str] = None):
        self.k_fn = k_fn
        self.rule = name or getattr(k_fn, "__name__", "custom")
        self.name = "det"

    @property
    def spec(self) -> str:
        return f"det:{self.rule}"

    def split(self, n: int) -> int:
        """The unique k with sigma(k, n - k) = 1."""
        self.check_level(n)
        k = self.k_fn(n)
        if not 1 <= k <= n - 1:
            raise SourceError(f"Split rule {self.rule} returned k={k} outside 1..{n - 1} at n={n}")
        return k

    def _sigma(self, k: int, n: int) -> float:
        return 1.0 if k == self.split(n) else 0.0

    def _row(self, n: int) -> np.ndarray:
        row = np.zeros(n - 1)
        row[self.split(n) - 1] = 1.0
        return row

    def sample_split(self, n: int, stream: "RandomStream") -> int:
        return self.split(n)


@dataclass(frozen=True)
class SigmaTable:
    """Per-level normalized weights; ``weights[n][k - 1]`` is sigma(k, n - k)."""

    n_max: int
    weights: Dict[int, np.ndarray] = field(repr=False)

    @classmethod
    def from_rows(cls, rows: List[Tuple[int, int, float]]) -> "SigmaTable":
        """Build a table from (n, k, weight) rows, normalizing each level."""
        raw: Dict[int, Dict[int, float]] = {}
        for n, k, weight in rows:
            if n < 2:
                raise SourceError(f"Table level must be at least 2, got n={n}")
            if not 1 <= k <= n - 1:
                raise SourceError(f"Table split k={k} outside 1..{n - 1} at n={n}")
            if weight < 0 or not math.isfinite(weight):
                raise SourceError(f"Table weight must be a non-negative number, got {weight} at n={n}, k={k}")
            level = raw.setdefault(n, {})
            if k in level:
                raise SourceError(f"Duplicate table row n={n}, k={k}")
            level[k] = weight
        if not raw:
            raise SourceError("Sigma table is empty")

        n_max = max(raw)
        weights: Dict[int, np.ndarray] = {}
        for n in range(2, n_max + 1):
            level = raw.get(n, {})
            total = math.fsum(level.values())
            if total <= 0:
                raise SourceError(f"Sigma table has no positive weight at level n={n}")
            row = np.zeros(n - 1)
            for k, weight in level.items():
                row[k - 1] = weight / total
            row.setflags(write=False)
            weights[n] = row
        return cls(n_max=n_max, weights=weights)


def load_table(path: Union[str, Path]) -> SigmaTable:
    """Load a sigma table from a CSV file with header ``n,k,weight``."""
    path = Path(path)
    rows: List[Tuple[int, int, float]] = []
    with open(path, "r", newline="") as f:
        reader = csv.DictReader(line for line in f if not line.startswith("#"))
        if reader.fieldnames is None or [name.strip() for name in reader.fieldnames] != ["n", "k", "weight"]:
            raise SourceError(f"Sigma table {path} must have header 'n,k,weight'")
        for line_no, record in enumerate(reader, start=2):
            try:
                rows.append((int(record["n"]), int(record["k"]), float(record["weight"])))
            except (TypeError, ValueError) as e:
                raise SourceError(f"Malformed row {line_no} in {path}: {e}") from e
    table = SigmaTable.from_rows(rows)
    logger.info(f"Loaded sigma table {path} with levels up to n={table.n_max}")
    return table


class TableSource(SplitSource):
    """Custom source backed by a :class:`SigmaTable`."""

    name = "table"

    def __init__(self, table: SigmaTable, label: str = "custom"):
        self.table = table
        self.label = label
        self.n_max = table.n_max
        self._cdf = {n: np.cumsum(row) for n, row in table.weights.items()}
        # Largest split with positive weight; rounding can leave u past cdf[-1]
        self._last = {n: int(np.flatnonzero(row > 0.0)[-1]) + 1 for n, row in table.weights.items()}

    @property
    def spec(self) -> str:
        return f"table:{self.label}"

    def _sigma(self, k: int, n: int) -> float:
        return float(self.table.weights[n][k - 1])

    def _row(self, n: int) -> np.ndarray:
        return self.table.weights[n].copy()

    def sample_split(self, n: int, stream: "RandomStream") -> int:
        self.check_level(n)
        cdf = self._cdf[n]
        k = int(np.searchsorted(cdf, stream.uniform(), side="right")) + 1
        return min(k, self._last[n])


class LevelCheck(BaseModel):
    """Normalization check of one level."""

    n: int
    total: Optional[float] = None
    deviation: Optional[float] = None
    ok: bool
    error: Optional[str] = None


class ValidationReport(BaseModel):
    """Per-level normalization report of a source."""

    source: str
    n_max: int
    tolerance: float
    entries: List[LevelCheck]

    @property
    def passed(self) -> bool:
        return all(entry.ok for entry in self.entries)

    @property
    def max_deviation(self) -> float:
        deviations = [e.deviation for e in self.entries if e.deviation is not None]
        return max(deviations, default=0.0)


def sigma(src: SplitSource, i: int, j: int) -> float:
    """Probability sigma(i, j) of splitting i + j leaves into (i, j)."""
    return src.sigma(i, j)


def sigma_star(src: SplitSource, i: int, j: int) -> float:
    """Symmetrised split: sigma(i, j) + sigma(j, i) off the diagonal, sigma(i, i) on it."""
    if i == j:
        return src.sigma(i, i)
    return src.sigma(i, j) + src.sigma(j, i)


def sigma_row(src: SplitSource, n: int) -> np.ndarray:
    """sigma(k, n - k) for k = 1..n-1."""
    return src.row(n)


def prob_of_tree(src: SplitSource, t: Tree) -> float:
    """P_sigma(t): product of sigma(|u|, |v|) over internal nodes f(u, v)."""
    probability = 1.0
    stack = [t]
    while stack:
        current = stack.pop()
        if current.left is None or current.right is None:
            continue
        probability *= src.sigma(current.left.leaves, current.right.leaves)
        if probability == 0.0:
            return 0.0
        stack.append(current.left)
        stack.append(current.right)
    return probability


def validate(src: SplitSource, n_max: int, tolerance: float = NORMALIZATION_TOLERANCE) -> ValidationReport:
    """Check that sigma restricted to every level 2..n_max is a probability mass function.

    Failures are reported as entries rather than raised.
    """
    if n_max < 2:
        raise ValueError(f"n_max must be at least 2, got {n_max}")
    logger.info(f"Validating source {src.spec} up to n={n_max}")
    entries: List[LevelCheck] = []
    for n in range(2, n_max + 1):
        try:
            row = src.row(n)
        except SourceError as e:
            entries.append(LevelCheck(n=n, ok=False, error=str(e)))
            continue
        total = math.fsum(row.tolist())
        deviation = abs(total - 1.0)
        in_range = bool(np.all((row >= 0.0) & (row <= 1.0)))
        entries.append(LevelCheck(n=n, total=total, deviation=deviation,
                                  ok=deviation <= tolerance and in_range))
    report = ValidationReport(source=src.spec, n_max=n_max, tolerance=tolerance, entries=entries)
    if not report.passed:
        logger.warning(f"Source {src.spec} failed normalization at "
                       f"{sum(not e.ok for e in entries)} levels")
    return report


def make_deterministic(k_fn: SplitRule, name: Optional[str] = None) -> DeterministicSource:
    """Deterministic source with sigma(k_fn(n), n - k_fn(n)) = 1."""
    return DeterministicSource(k_fn, name)


def mirror_source(src: SplitSource) -> SplitSource:
    """Source of mirrored trees; defined for binomial sources (p -> 1 - p)."""
    if isinstance(src, BinomialSource):
        return BinomialSource(1.0 - src.p)
    if isinstance(src, (BstSource, CatalanSource)):
        return src
    raise SourceError(f"No mirror source known for {src.spec}")


def parse_source(spec: str, catalan_levels: int = DEFAULT_CATALAN_LEVELS) -> SplitSource:
    """Build a source from the mini-language.

    Accepted forms: ``bst``, ``binomial:p=0.3``, ``catalan``, ``det:quarter``,
    ``det:half``, ``det:comb``, ``table:path.csv``.
    """
    kind, _, argument = spec.strip().partition(":")
    kind = kind.lower()
    if kind == "bst" and not argument:
        return BstSource()
    if kind in ("catalan", "uniform_catalan") and not argument:
        return CatalanSource(catalan_levels)
    if kind == "binomial":
        key, _, value = argument.partition("=")
        if key.strip() != "p" or not value:
            raise SourceError(f"Binomial source needs 'binomial:p=<real>', got {spec!r}")
        try:
            p = float(value)
        except ValueError as e:
            raise SourceError(f"Invalid binomial parameter in {spec!r}") from e
        return BinomialSource(p)
    if kind == "det":
        rule = DETERMINISTIC_RULES.get(argument)
        if rule is None:
            raise SourceError(f"Unknown deterministic rule {argument!r}. "
                              f"Must be one of: {', '.join(DETERMINISTIC_RULES)}")
        return DeterministicSource(rule, argument)
    if kind == "table" and argument:
        return TableSource(load_table(argument), label=argument)
    raise SourceError(f"Invalid source spec {spec!r}")
