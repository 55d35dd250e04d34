#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 09, 2025
#
# Description: Closed-form DAG size bounds, source class-membership fitting
# and Monte Carlo trend reports.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import math
from enum import Enum
from typing import Callable, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel

from dagstat.errors import BoundsError
from dagstat.trees.dag import field_width
from dagstat.trees.detsource import det_dag_size
from dagstat.trees.expectation import small_subtree_bound
from dagstat.trees.sampler import DEFAULT_Z, estimate_dag_size, replicate_seed
from dagstat.trees.sources import (
    BinomialSource,
    BstSource,
    CatalanSource,
    DeterministicSource,
    SplitSource,
)

logger = logging.getLogger(__name__)

# Reported next to uniform-Catalan trends; the size convention it refers to may differ
FLAJOLET_CONSTANT = 2.0 * math.sqrt(math.log(4.0 / math.pi))

_EPS = 1e-12


class NamedFunction(BaseModel):
    """A named positive decreasing function of the tree size."""

    kind: Literal["reciprocal", "power", "inverse_log", "constant", "inverse_sqrt"]
    c: float = 1.0
    alpha: float = 1.0

    def __call__(self, x: float) -> float:
        # psi forms are returned as written; only phi values are clipped into (0, 1]
        if self.kind == "reciprocal":
            self._check_domain(x, 1.0)
            return 2.0 / (x - 1.0)
        if self.kind == "power":
            self._check_domain(x, 0.0)
            return self.c / x ** self.alpha
        if self.kind == "inverse_log":
            self._check_domain(x, 1.0)
            return self.c / math.log2(x)
        if self.kind == "constant":
            return self.c
        return min(1.0, self.c / math.sqrt(x))

    def _check_domain(self, x: float, bound: float) -> None:
        if x <= bound:
            raise BoundsError(f"{self.label} is undefined at x={x}; needs x > {bound:g}")

    @property
    def label(self) -> str:
        labels = {
            "reciprocal": "2/(x-1)",
            "power": f"{self.c:g}/x^{self.alpha:g}",
            "inverse_log": f"{self.c:g}/log(x)",
            "constant": f"{self.c:g}",
            "inverse_sqrt": f"{self.c:g}/sqrt(x)",
        }
        return labels[self.kind]


def psi_reciprocal() -> NamedFunction:
    return NamedFunction(kind="reciprocal")


def psi_power(c: float, alpha: float) -> NamedFunction:
    if not 0.0 <= alpha <= 1.0 or c <= 0:
        raise BoundsError(f"psi = c/x^alpha needs c > 0 and 0 <= alpha <= 1, got c={c}, alpha={alpha}")
    return NamedFunction(kind="power", c=c, alpha=alpha)


def psi_inverse_log(c: float) -> NamedFunction:
    if c <= 0:
        raise BoundsError(f"psi = c/log x needs c > 0, got {c}")
    return NamedFunction(kind="inverse_log", c=c)


def phi_constant(nu: float) -> NamedFunction:
    if not 0.0 < nu <= 1.0:
        raise BoundsError(f"Constant phi must lie in (0, 1], got {nu}")
    return NamedFunction(kind="constant", c=nu)


def phi_inverse_sqrt(c: float) -> NamedFunction:
    if c <= 0:
        raise BoundsError(f"phi = c/sqrt(n) needs c > 0, got {c}")
    return NamedFunction(kind="inverse_sqrt", c=c)


class BoundProfile(BaseModel):
    """Class-membership constants of a source.

    ``n_rho`` is the level from which sigma <= rho holds; ``onset`` is the
    level from which the phi band condition holds.
    """

    rho: Optional[float] = None
    n_rho: Optional[int] = None
    psi: Optional[NamedFunction] = None
    phi: Optional[NamedFunction] = None
    c: Optional[float] = None
    onset: int = 2


class TheoremKind(str, Enum):
    PSI_UPPER = "psi_upper"
    LOWER = "lower"
    PHI_UPPER = "phi_upper"
    DET = "det"


class PhiEntry(BaseModel):
    n: int
    lo: int
    hi: int
    mass: float
    required: float
    ok: bool


class PhiReport(BaseModel):
    c: float
    phi: str
    entries: List[PhiEntry]

    @property
    def passed(self) -> bool:
        return all(entry.ok for entry in self.entries)


class TrendRow(BaseModel):
    n: int
    estimate: float
    stderr: float
    normalized: float
    bound_upper: Optional[float] = None
    bound_lower: Optional[float] = None


NORMALIZERS: Dict[str, Callable[[int], float]] = {
    "log2": lambda n: math.log2(n),
    "sqrt_log2": lambda n: math.sqrt(math.log2(n)),
    "one": lambda n: 1.0,
}


def fit_rho(src: SplitSource, n_lo: int, n_hi: int) -> Tuple[float, int]:
    """Smallest N in [n_lo, n_hi] with max_{N <= n <= n_hi, k} sigma(k, n-k) < 1, and that max.

    Raises:
        BoundsError: If the range is empty or no such N exists.
    """
    n_lo = max(2, n_lo)
    if n_lo > n_hi:
        raise BoundsError(f"Empty fitting range [{n_lo}, {n_hi}]")
    maxima = [float(src.row(n).max()) for n in range(n_lo, n_hi + 1)]
    suffix = maxima[:]
    for index in range(len(suffix) - 2, -1, -1):
        suffix[index] = max(suffix[index], suffix[index + 1])
    for index, value in enumerate(suffix):
        if value < 1.0 - _EPS:
            logger.debug(f"Fitted rho={value} from N={n_lo + index} for {src.spec}")
            return value, n_lo + index
    raise BoundsError(f"No rho < 1 fits {src.spec} on [{n_lo}, {n_hi}]")


def band_limits(n: int, c: float) -> Tuple[int, int]:
    """Integer range ceil(n/c)..floor(n - n/c), clipped to 1..n-1."""
    lo = max(1, math.ceil(n / c - _EPS))
    hi = min(n - 1, math.floor(n - n / c + _EPS))
    return lo, hi


def band_mass(src: SplitSource, c: float, n: int) -> float:
    """Mass of the splits with n/c <= k <= n - n/c."""
    lo, hi = band_limits(n, c)
    if lo > hi:
        return 0.0
    return math.fsum(src.row(n)[lo - 1:hi].tolist())


def binomial_band_floor(p: float) -> float:
    """1 - 4(1 - p)/(p + 4): band mass guaranteed for c = 6/p when p <= 1/2."""
    return 1.0 - 4.0 * (1.0 - p) / (p + 4.0)


def check_phi_membership(src: SplitSource, c: float, phi: NamedFunction, n_lo: int, n_hi: int) -> PhiReport:
    """Compare the band mass of every level in [n_lo, n_hi] with phi(n)."""
    if c < 3:
        raise BoundsError(f"Band constant c must be at least 3, got {c}")
    entries = []
    for n in range(max(2, n_lo), n_hi + 1):
        lo, hi = band_limits(n, c)
        mass = band_mass(src, c, n)
        required = phi(n)
        entries.append(PhiEntry(n=n, lo=lo, hi=hi, mass=mass, required=required,
                                ok=mass >= required - _EPS))
    return PhiReport(c=c, phi=phi.label, entries=entries)


def band_onset(src: SplitSource, c: float, n_lo: int, n_hi: int) -> Optional[int]:
    """Smallest N in [n_lo, n_hi] from which every level keeps all its mass in the band."""
    onset = None
    for n in range(n_hi, max(2, n_lo) - 1, -1):
        if band_mass(src, c, n) < 1.0 - _EPS:
            break
        onset = n
    return onset


def upper_cut_point(n: int) -> int:
    """b = ceil(log4(n)/2), the smallest b with 16^b >= n, clipped to 1..n."""
    b = 0
    while 16 ** b < n:
        b += 1
    return min(max(1, b), max(1, n))


def det_cut_point(n: int) -> int:
    """b = ceil(sqrt(n))."""
    return math.isqrt(n - 1) + 1 if n > 1 else 1


def theorem_bounds(kind: TheoremKind, profile: BoundProfile, n: int) -> float:
    """Explicit form of a theorem-level bound on D_sigma(n).

    psi_upper: 4n psi(b) + 4^b/3 with b = ceil(log4(n)/2)
    lower:     log(1/rho) n / ((4 N_rho - 4) 2 ceil(log(2n - 1)))
    phi_upper: c n / (phi(n) b) + 4^b/3 with b = ceil(log4(n)/2)
    det:       c n / (phi(n) b) + b with b = ceil(sqrt(n)), phi = 1 unless given
    """
    kind = TheoremKind(kind)
    if n < 2:
        raise BoundsError(f"Bounds need n >= 2, got {n}")
    if kind is TheoremKind.PSI_UPPER:
        if profile.psi is None:
            raise BoundsError("psi_upper needs a psi function")
        b = upper_cut_point(n)
        return 4.0 * n * profile.psi(b) + small_subtree_bound(b)
    if kind is TheoremKind.LOWER:
        if profile.rho is None or profile.n_rho is None:
            raise BoundsError("lower needs rho and N_rho")
        n_sigma = max(2, profile.n_rho)
        return math.log2(1.0 / profile.rho) * n / ((4 * n_sigma - 4) * 2 * field_width(n))
    if profile.c is None:
        raise BoundsError(f"{kind.value} needs the band constant c")
    if kind is TheoremKind.PHI_UPPER:
        if profile.phi is None:
            raise BoundsError("phi_upper needs a phi function")
        b = upper_cut_point(n)
        return profile.c * n / (profile.phi(n) * b) + small_subtree_bound(b)
    b = det_cut_point(n)
    phi_n = profile.phi(n) if profile.phi is not None else 1.0
    return profile.c * n / (phi_n * b) + b


def profile_for(src: SplitSource, fit_range: Tuple[int, int] = (2, 256)) -> BoundProfile:
    """Class-membership constants for a source, fitted where not known in closed form."""
    if isinstance(src, BstSource):
        return BoundProfile(rho=0.5, n_rho=3, psi=psi_reciprocal(), phi=phi_constant(0.5), c=4.0)

    lo, hi = fit_range
    if src.n_max is not None:
        hi = min(hi, src.n_max)
    if isinstance(src, DeterministicSource):
        # The quarter rule keeps its split inside the c = 6 band from n = 8 on
        onset = band_onset(src, 6.0, lo, hi)
        if onset is None:
            logger.warning(f"Split rule of {src.spec} leaves the c=6 band; no phi bound applies")
            return BoundProfile()
        return BoundProfile(phi=phi_constant(1.0), c=6.0, onset=onset)

    try:
        rho, n_rho = fit_rho(src, lo, hi)
    except BoundsError as e:
        logger.warning(f"No rho fit for {src.spec}: {e}")
        rho, n_rho = None, None

    if isinstance(src, BinomialSource):
        q = min(src.p, 1.0 - src.p)
        return BoundProfile(rho=rho, n_rho=n_rho, phi=phi_constant(binomial_band_floor(q)),
                            c=6.0 / q, onset=3)
    if isinstance(src, CatalanSource):
        # Band mass decays like 1/sqrt(n); fit the constant on the range
        a = min(band_mass(src, 3.0, n) * math.sqrt(n) for n in range(max(2, lo), hi + 1))
        return BoundProfile(rho=rho, n_rho=n_rho, phi=phi_inverse_sqrt(a), c=3.0)
    return BoundProfile(rho=rho, n_rho=n_rho)


def _safe_bound(kind: TheoremKind, profile: BoundProfile, n: int) -> Optional[float]:
    try:
        return theorem_bounds(kind, profile, n)
    except BoundsError:
        return None


def trend_report(src: SplitSource, n_list: Sequence[int], reps: int, seed: int,
                 normalizer: str = "log2", workers: int = 1,
                 profile: Optional[BoundProfile] = None, z: float = DEFAULT_Z) -> List[TrendRow]:
    """Estimate D_sigma(n) along ``n_list`` and normalize by n / normalizer(n).

    Deterministic sources use the exact DAG size (stderr 0). Each n gets its
    own master seed derived from ``seed``.
    """
    if list(n_list) != sorted(n_list):
        raise ValueError("n_list must be ascending")
    if normalizer not in NORMALIZERS:
        raise ValueError(f"Invalid normalizer: {normalizer}. Must be one of: {', '.join(NORMALIZERS)}")
    norm = NORMALIZERS[normalizer]
    if profile is None:
        profile = profile_for(src)

    rows = []
    for n in n_list:
        if isinstance(src, DeterministicSource):
            estimate, stderr = float(det_dag_size(src, n)), 0.0
            upper = _safe_bound(TheoremKind.DET, profile, n)
        else:
            report = estimate_dag_size(src, n, reps, replicate_seed(seed, n), workers, z)
            estimate, stderr = report.mean, report.stderr
            kind = TheoremKind.PSI_UPPER if profile.psi is not None else TheoremKind.PHI_UPPER
            upper = _safe_bound(kind, profile, n)
        rows.append(TrendRow(
            n=n,
            estimate=estimate,
            stderr=stderr,
            normalized=estimate * norm(n) / n if n > 1 else math.nan,
            bound_upper=upper,
            bound_lower=_safe_bound(TheoremKind.LOWER, profile, n),
        ))
        logger.info(f"Trend point n={n}: estimate={estimate:.4f} stderr={stderr:.4f}")
    return rows
