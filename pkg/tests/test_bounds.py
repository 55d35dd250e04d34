import math

import pytest

from conftest import SLOW_WORKERS
from dagstat.errors import BoundsError
from dagstat.trees.bounds import (
    FLAJOLET_CONSTANT,
    BoundProfile,
    TheoremKind,
    band_limits,
    band_mass,
    band_onset,
    binomial_band_floor,
    check_phi_membership,
    det_cut_point,
    fit_rho,
    phi_constant,
    phi_inverse_sqrt,
    profile_for,
    psi_inverse_log,
    psi_power,
    psi_reciprocal,
    theorem_bounds,
    trend_report,
    upper_cut_point,
)
from dagstat.trees.detsource import det_dag_size
from dagstat.trees.expectation import cutpoint_upper_bound
from dagstat.trees.sources import BinomialSource, BstSource, CatalanSource, parse_source


class TestNamedFunctions:
    def test_reciprocal(self):
        psi = psi_reciprocal()
        assert psi(5) == pytest.approx(0.5)
        assert psi(2) == pytest.approx(2.0)
        assert psi(3) == pytest.approx(1.0)
        assert psi.label == "2/(x-1)"
        with pytest.raises(BoundsError):
            psi(1)

    def test_reciprocal_dominates_its_own_floor(self):
        psi = psi_reciprocal()
        for x in range(2, 200):
            assert psi(x) >= 2.0 / (x - 1) - 1e-15
            assert psi(x + 1) < psi(x)

    def test_power_and_log(self):
        assert psi_power(2.0, 0.5)(16) == pytest.approx(0.5)
        assert psi_power(2.0, 0.5)(1) == pytest.approx(2.0)
        assert psi_inverse_log(1.0)(16) == pytest.approx(0.25)
        assert psi_inverse_log(4.0)(2) == pytest.approx(4.0)
        with pytest.raises(BoundsError):
            psi_inverse_log(1.0)(1)
        with pytest.raises(BoundsError):
            psi_power(1.0, 0.5)(0)
        with pytest.raises(BoundsError):
            psi_power(1.0, 1.5)
        with pytest.raises(BoundsError):
            psi_inverse_log(0.0)

    def test_phi(self):
        assert phi_constant(0.5)(1000) == 0.5
        assert phi_inverse_sqrt(2.0)(16) == pytest.approx(0.5)
        with pytest.raises(BoundsError):
            phi_constant(0.0)


class TestCutPoints:
    @pytest.mark.parametrize("n, b", [(1, 1), (2, 1), (16, 1), (17, 2), (256, 2), (257, 3), (65536, 4)])
    def test_upper_cut_point(self, n, b):
        assert upper_cut_point(n) == b

    @pytest.mark.parametrize("n, b", [(1, 1), (2, 2), (4, 2), (5, 3), (100, 10), (101, 11)])
    def test_det_cut_point(self, n, b):
        assert det_cut_point(n) == b


class TestMembership:
    def test_fit_rho(self, catalan_source):
        assert fit_rho(BinomialSource(0.3), 2, 256) == (pytest.approx(0.7), 3)
        assert fit_rho(catalan_source, 2, 256) == (pytest.approx(0.5), 3)
        assert fit_rho(BstSource(), 2, 100) == (pytest.approx(0.5), 3)

    def test_fit_rho_catalan_tail(self, catalan_source):
        rho, n_rho = fit_rho(catalan_source, 1000, 2000)
        assert rho == pytest.approx(0.25, abs=0.01)
        assert n_rho == 1000

    def test_fit_rho_fails_for_deterministic(self):
        with pytest.raises(BoundsError):
            fit_rho(parse_source("det:quarter"), 2, 100)

    def test_band_limits(self):
        assert band_limits(12, 4) == (3, 9)
        assert band_limits(2, 3) == (1, 1)

    def test_bst_band(self):
        report = check_phi_membership(BstSource(), 4, phi_constant(0.5), 2, 400)
        assert report.passed
        assert report.phi == "0.5"

    @pytest.mark.parametrize("p", [0.2, 0.5])
    @pytest.mark.parametrize("n", [3, 10, 100, 1000])
    def test_binomial_band_floor(self, p, n):
        report = check_phi_membership(BinomialSource(p), 6 / p, phi_constant(binomial_band_floor(p)), n, n)
        assert report.passed

    def test_band_constant_range(self):
        with pytest.raises(BoundsError):
            check_phi_membership(BstSource(), 2, phi_constant(0.5), 2, 10)

    def test_deterministic_onset(self):
        assert band_onset(parse_source("det:quarter"), 6.0, 2, 256) == 8
        assert band_onset(parse_source("det:half"), 6.0, 2, 256) == 2
        assert band_onset(parse_source("det:comb"), 6.0, 2, 256) is None
        assert band_mass(parse_source("det:quarter"), 6.0, 7) == 0.0


class TestProfiles:
    def test_bst(self):
        profile = profile_for(BstSource())
        assert (profile.rho, profile.n_rho, profile.c) == (0.5, 3, 4.0)
        assert profile.phi(100) == 0.5

    def test_binomial(self):
        profile = profile_for(BinomialSource(0.75))
        assert profile.c == pytest.approx(24.0)
        assert profile.phi(10) == pytest.approx(binomial_band_floor(0.25))
        assert profile.rho == pytest.approx(0.75)

    def test_catalan_band_holds_on_fit_range(self, catalan_source):
        profile = profile_for(catalan_source)
        assert profile.c == 3.0
        assert check_phi_membership(catalan_source, profile.c, profile.phi, 2, 256).passed

    def test_deterministic(self):
        assert profile_for(parse_source("det:quarter")).onset == 8
        assert profile_for(parse_source("det:comb")).c is None


class TestTheoremBounds:
    def test_psi_upper(self):
        profile = profile_for(BstSource())
        # b = 2, psi(2) = 2
        assert theorem_bounds(TheoremKind.PSI_UPPER, profile, 256) == pytest.approx(4 * 256 * 2 + 16 / 3)
        # b = 4, psi(4) = 2/3
        assert theorem_bounds(TheoremKind.PSI_UPPER, profile, 4 ** 8) == pytest.approx(
            4 * 4 ** 8 * (2 / 3) + 4 ** 4 / 3)

    def test_psi_upper_undefined_at_cut_point_one(self):
        profile = profile_for(BstSource())
        with pytest.raises(BoundsError):
            theorem_bounds(TheoremKind.PSI_UPPER, profile, 16)

    def test_lower(self):
        profile = profile_for(BstSource())
        assert theorem_bounds("lower", profile, 16) == pytest.approx(0.2)

    def test_phi_upper(self):
        profile = profile_for(BstSource())
        assert theorem_bounds(TheoremKind.PHI_UPPER, profile, 256) == pytest.approx(1024 + 16 / 3)

    def test_det(self):
        profile = profile_for(parse_source("det:quarter"))
        assert theorem_bounds(TheoremKind.DET, profile, 100) == pytest.approx(70.0)

    def test_det_bound_holds(self):
        src = parse_source("det:quarter")
        profile = profile_for(src)
        for n in range(8, 3000, 7):
            assert det_dag_size(src, n) <= theorem_bounds(TheoremKind.DET, profile, n)

    def test_cutpoint_bound_below_psi_bound(self):
        profile = profile_for(BstSource())
        for n in (20, 300, 5000):
            b = upper_cut_point(n)
            assert cutpoint_upper_bound(BstSource(), b, n) <= theorem_bounds(TheoremKind.PSI_UPPER, profile, n)

    def test_missing_constants(self):
        with pytest.raises(BoundsError):
            theorem_bounds(TheoremKind.PSI_UPPER, BoundProfile(), 16)
        with pytest.raises(BoundsError):
            theorem_bounds(TheoremKind.LOWER, BoundProfile(), 16)
        with pytest.raises(BoundsError):
            theorem_bounds(TheoremKind.DET, BoundProfile(), 16)
        with pytest.raises(BoundsError):
            theorem_bounds(TheoremKind.LOWER, profile_for(BstSource()), 1)


class TestTrend:
    def test_rows(self):
        rows = trend_report(BstSource(), [64, 128], reps=20, seed=3)
        assert [row.n for row in rows] == [64, 128]
        for row in rows:
            assert row.normalized == pytest.approx(row.estimate * math.log2(row.n) / row.n)
            assert row.bound_lower <= row.estimate <= row.bound_upper

    def test_deterministic_is_exact(self):
        src = parse_source("det:quarter")
        rows = trend_report(src, [100, 1000], reps=2, seed=0, normalizer="one")
        assert [row.estimate for row in rows] == [det_dag_size(src, 100), det_dag_size(src, 1000)]
        assert all(row.stderr == 0.0 for row in rows)
        assert all(row.bound_lower is None for row in rows)

    def test_workers_do_not_change_rows(self):
        serial = trend_report(BinomialSource(0.3), [32, 64], reps=12, seed=5, workers=1)
        parallel = trend_report(BinomialSource(0.3), [32, 64], reps=12, seed=5, workers=2)
        assert serial == parallel

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            trend_report(BstSource(), [128, 64], reps=4, seed=1)
        with pytest.raises(ValueError):
            trend_report(BstSource(), [64], reps=4, seed=1, normalizer="cube")

    def test_reference_constant(self):
        assert FLAJOLET_CONSTANT == pytest.approx(2 * math.sqrt(math.log(4 / math.pi)))


GRID = [2 ** 10, 2 ** 12, 2 ** 14, 2 ** 16, 2 ** 18]


@pytest.mark.slow
def test_bst_ratio_band():
    rows = trend_report(BstSource(), GRID, reps=2000, seed=7, workers=SLOW_WORKERS)
    ratios = [row.normalized for row in rows]
    assert max(ratios) / min(ratios) <= 4
    for row in rows:
        lower = math.log2(2) * row.n / (8 * 2 * (2 * row.n - 2).bit_length())
        assert lower == pytest.approx(row.bound_lower)
        assert lower <= row.estimate + 4 * row.stderr
        assert row.estimate <= row.bound_upper


@pytest.mark.slow
def test_catalan_ratio_band():
    src = CatalanSource(GRID[-1])
    rows = trend_report(src, GRID, reps=2000, seed=11, normalizer="sqrt_log2", workers=SLOW_WORKERS)
    ratios = [row.normalized for row in rows]
    assert max(ratios) / min(ratios) <= 4
