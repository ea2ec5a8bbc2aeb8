#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

import math

import pytest
from pytest import approx

from simpson import config
from simpson.conditions import CONDITIONS, PreconditionError
from simpson.sampling import SamplerConfig, TableFilter
from simpson.simulation import (
    FAMILIES,
    GIVEN_CONDITION,
    NOT_GIVEN_NOT,
    REVERSALS,
    Estimate,
    TallyGrid,
    analyze_case,
    run_conditional,
    run_unconditional,
)
from simpson.tables import CollapsedTable, collapse

# published estimates per condition: (strong, ard, weak)
GIVEN_UNCONDITIONAL = {
    "cornfield": (0.0805, 0.3538, 0.8607),
    "risk_ratio": (0.0750, 0.3794, 0.8232),
    "risk_difference": (0.1161, 0.4959, 0.9300),
    "pearson": (0.2004, 0.7526, 0.9983),
    "mixed": (0.1626, 0.6384, 0.9483),
    "odds_ratio": (0.1503, 0.6132, 0.9428),
}

NOT_GIVEN_UNCONDITIONAL = {
    "cornfield": (0.9912, 0.9490, 0.5364),
    "risk_ratio": (0.9925, 0.9615, 0.5427),
    "risk_difference": (0.9915, 0.9496, 0.5285),
    "pearson": (1.0, 0.9767, 0.5395),
    "mixed": (1.0, 0.9792, 0.5451),
    "odds_ratio": (1.0, 0.9818, 0.5489),
}

GIVEN_CONDITIONAL = {
    "cornfield": (0.0544, 0.2064, 0.9586),
    "risk_ratio": (0.0543, 0.2096, 0.9400),
    "risk_difference": (0.0506, 0.1890, 0.9415),
    "pearson": (0.0801, 0.2572, 1.0),
    "mixed": (0.0716, 0.2380, 0.9872),
    "odds_ratio": (0.0430, 0.1659, 0.9089),
}

NOT_GIVEN_CONDITIONAL = {
    "cornfield": (0.9860, 0.9397, 0.3382),
    "risk_ratio": (0.9860, 0.9406, 0.3335),
    "risk_difference": (0.9858, 0.9377, 0.3393),
    "pearson": (1.0, 0.9741, 0.3844),
    "mixed": (1.0, 0.9764, 0.3969),
    "odds_ratio": (1.0, 0.9910, 0.4769),
}

# conditions whose absence rules out Strong Simpson in either W orientation
NECESSARY = ("pearson", "odds_ratio")


def small(seed=42, n=3000, filter=TableFilter.OR_XY_GT_1):
    return SamplerConfig(seed=seed, filter=filter, target_accepted=n)


def assert_matches(report, published, family, tolerance):
    for condition, values in published.items():
        for reversal, expected in zip(REVERSALS, values):
            estimate = report.get(condition, reversal, family)
            assert estimate.p_hat == approx(expected, abs=tolerance), (condition, reversal, family)


class TestTallyGrid:
    def test_cells_partition_accepted(self, kidney):
        tally = TallyGrid()
        for _ in range(3):
            tally.add_table(kidney)
        tally.add((False,) * 6, (False, False, True))
        for condition in CONDITIONS:
            for reversal in REVERSALS:
                assert sum(tally.cell(condition, reversal)) == tally.accepted == 4

    def test_kidney_tallies(self, kidney):
        tally = TallyGrid()
        tally.add_table(kidney)
        n11, n10, n01, n00 = tally.cell("pearson", "strong")
        assert (n11, n10, n01, n00) == (1, 0, 0, 0)
        assert tally.overlap[1][1] == 1

    def test_merge(self, kidney):
        left, right = TallyGrid(), TallyGrid()
        left.add_table(kidney)
        right.add((True,) * 6, (False,) * 3)
        right.rejected = 5
        merged = left + right
        assert merged.accepted == 2
        assert merged.rejected == 5
        assert merged.cell("cornfield", "ard") == (1, 1, 0, 0)


class TestEstimate:
    def test_standard_error(self):
        estimate = Estimate("odds_ratio", "strong", GIVEN_CONDITION, hits=50, n=100)
        assert estimate.p_hat == 0.5
        assert estimate.se == approx(0.05)

    def test_undefined(self):
        estimate = Estimate("odds_ratio", "strong", GIVEN_CONDITION, hits=0, n=0)
        assert estimate.p_hat is None
        assert estimate.se is None
        assert estimate.as_dict()["p_hat"] is None


class TestUnconditional:
    def test_report_shape(self):
        report = run_unconditional(small(), allow_small=True)
        assert report.accepted == 3000
        assert len(report.estimates) == 36
        assert [e.family for e in report.estimates[:18]] == [GIVEN_CONDITION] * 18
        for condition in CONDITIONS:
            for reversal in REVERSALS:
                given = report.get(condition, reversal, GIVEN_CONDITION)
                other = report.get(condition, reversal, NOT_GIVEN_NOT)
                assert given.n + other.n == report.accepted
                if given.n:
                    assert given.se == approx(math.sqrt(given.p_hat * (1 - given.p_hat) / given.n))

    def test_strong_needs_condition(self):
        for seed in (1, 2, 3):
            report = run_unconditional(small(seed=seed, n=2000), allow_small=True)
            for condition in NECESSARY:
                estimate = report.get(condition, "strong", NOT_GIVEN_NOT)
                assert estimate.n == 0 or estimate.p_hat == 1.0

    def test_workers_do_not_change_results(self, monkeypatch):
        monkeypatch.setattr(config, "CHUNK_SIZE", 500)
        inline = run_unconditional(small(n=2000), workers=1, allow_small=True)
        pooled = run_unconditional(small(n=2000), workers=2, allow_small=True)
        assert inline.estimates == pooled.estimates
        assert inline.rejected == pooled.rejected
        assert inline.overlap == pooled.overlap

    def test_small_runs_need_override(self):
        with pytest.raises(PreconditionError):
            run_unconditional(small(n=100))

    def test_metadata(self):
        report = run_unconditional(small(seed=5, n=1000), allow_small=True)
        meta = report.metadata()
        assert meta["seed"] == 5
        assert meta["filter"] == "or_xy"
        assert meta["accepted"] == 1000
        assert 0.4 < meta["acceptance_rate"] < 0.6
        assert sum(meta["ard_ls_overlap"].values()) == 1000


class TestConditional:
    def test_keeps_sampled_orientation(self, zika):
        report = run_conditional(zika, small(n=1000), allow_small=True)
        assert report.kind == "conditional"
        assert report.sampler.filter is TableFilter.OR_XY_GT_1
        assert report.source == zika
        assert report.accepted == 1000
        assert report.rejected < 5

    def test_or_wy_filter(self, zika):
        cfg = small(n=1000, filter=TableFilter.OR_XY_AND_OR_WY_GT_1)
        report = run_conditional(zika, cfg, allow_small=True)
        assert report.sampler.filter is TableFilter.OR_XY_AND_OR_WY_GT_1
        assert 700 < report.rejected < 1300

    def test_degenerate_input(self):
        with pytest.raises(PreconditionError):
            run_conditional(CollapsedTable.from_abcd(0, 91, 16533, 1784), small(), allow_small=True)

    def test_negative_association(self):
        with pytest.raises(PreconditionError):
            run_conditional(CollapsedTable.from_text("1,1,1,1"), small(), allow_small=True)


class TestAnalyzeCase:
    def test_zika(self, zika):
        case = analyze_case(zika, 1.4)
        assert case.r_xy == approx(0.0328, abs=1e-4)
        assert case.or_xy == approx(1.6833, abs=1e-4)
        assert 5.0 < case.threshold.required_or_wx < 5.5
        assert case.reversal_plausible is None
        assert case.simulation is None

    def test_plausible_bound(self, zika):
        case = analyze_case(zika, 1.4, or_wx_plausible=3.0)
        assert case.reversal_plausible is False
        assert "unlikely" in " ".join(case.interpretation())
        assert analyze_case(zika, 1.4, or_wx_plausible=8.0).reversal_plausible is True

    def test_unattainable(self, zika):
        case = analyze_case(zika, 1.0001)
        assert not case.threshold.attainable
        assert "No OR_WX" in case.interpretation()[0]

    def test_kidney(self, kidney):
        case = analyze_case(collapse(kidney), 2.0)
        assert case.threshold.required_or_wx == approx(4.03, abs=0.01)
        assert case.threshold.is_exceeded_by(270 * 263 / (87 * 80))

    def test_embedded_simulation(self, zika):
        case = analyze_case(zika, 1.4, cfg=small(n=500), allow_small=True)
        assert case.simulation.accepted == 500
        assert case.as_dict()["threshold"]["attainable"] is True

    def test_bad_bound(self, zika):
        with pytest.raises(PreconditionError):
            analyze_case(zika, 1.0)


class TestPublishedSmoke:
    """Small runs checked against the published estimates that separate
    sampler variants."""

    def test_unconditional(self):
        report = run_unconditional(small(n=10000), allow_small=True)
        cornfield = report.get("cornfield", "strong", NOT_GIVEN_NOT)
        assert cornfield.p_hat < 1.0
        assert cornfield.p_hat == approx(0.9912, abs=0.05)
        for condition, reversal, family, expected in (
            ("risk_ratio", "ard", GIVEN_CONDITION, 0.3794),
            ("pearson", "strong", GIVEN_CONDITION, 0.2004),
            ("odds_ratio", "ard", NOT_GIVEN_NOT, 0.9818),
        ):
            estimate = report.get(condition, reversal, family)
            assert estimate.p_hat == approx(expected, abs=0.05), (condition, reversal)

    def test_conditional(self, zika):
        report = run_conditional(zika, small(n=5000), allow_small=True)
        for condition, reversal, family, expected in (
            ("cornfield", "ard", NOT_GIVEN_NOT, 0.9397),
            ("risk_difference", "weak", NOT_GIVEN_NOT, 0.3393),
            ("risk_ratio", "weak", GIVEN_CONDITION, 0.9400),
        ):
            estimate = report.get(condition, reversal, family)
            assert estimate.p_hat == approx(expected, abs=0.05), (condition, reversal)


@pytest.mark.slow
class TestPublishedTables:
    @pytest.fixture(scope="class")
    def unconditional(self):
        return run_unconditional(SamplerConfig(seed=42, target_accepted=50000), workers=None)

    @pytest.fixture(scope="class")
    def conditional(self):
        zika = CollapsedTable.from_text("501,91,16533,1784")
        return run_conditional(zika, SamplerConfig(seed=42, target_accepted=50000), workers=None)

    def test_given_condition(self, unconditional):
        assert_matches(unconditional, GIVEN_UNCONDITIONAL, GIVEN_CONDITION, 0.02)

    def test_not_given_not_condition(self, unconditional):
        assert_matches(unconditional, NOT_GIVEN_UNCONDITIONAL, NOT_GIVEN_NOT, 0.02)
        for condition in NECESSARY:
            estimate = unconditional.get(condition, "strong", NOT_GIVEN_NOT)
            assert estimate.p_hat == 1.0
            assert estimate.se == 0.0

    def test_headline(self, unconditional):
        estimate = unconditional.get("odds_ratio", "ard", NOT_GIVEN_NOT)
        assert 0.013 <= 1.0 - estimate.p_hat <= 0.025

    def test_conditional_given_condition(self, conditional):
        assert_matches(conditional, GIVEN_CONDITIONAL, GIVEN_CONDITION, 0.03)

    def test_conditional_not_given_not_condition(self, conditional):
        assert_matches(conditional, NOT_GIVEN_CONDITIONAL, NOT_GIVEN_NOT, 0.03)

    def test_standard_errors_shrink(self):
        cfg = SamplerConfig(seed=7, target_accepted=40000)
        smaller = run_unconditional(cfg, workers=None)
        larger = run_unconditional(cfg.with_target(80000), workers=None)
        for family in FAMILIES:
            p = smaller.get("odds_ratio", "ard", family)
            q = larger.get("odds_ratio", "ard", family)
            assert p.se / q.se == approx(math.sqrt(2), rel=0.05)
