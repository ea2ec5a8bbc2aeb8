#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

import itertools

import pytest

from simpson.tables import Margin
from simpson.verify import (
    CHECKS,
    CheckTally,
    bound_holds,
    check_grid,
    check_zero_interaction,
    run_verify,
)


def positive_margins(high):
    for a, b, c, d in itertools.product(range(1, high + 1), repeat=4):
        if b * c > a * d:
            yield a, b, c, d


class TestCorrelationBound:
    def test_equality_case(self):
        assert bound_holds(Margin(1, 3, 3, 1), strict=True)
        assert bound_holds(Margin(2, 5, 5, 2), strict=True)

    def test_strict_elsewhere(self):
        assert bound_holds(Margin(1, 3, 2, 1), strict=True)

    def test_grid(self):
        tally = CheckTally()
        check_grid(tally)
        check = dict((c.name, c) for c in tally.checks())["bound_grid"]
        assert check.antecedents == len(list(positive_margins(6)))
        assert check.counterexamples == 0


class TestZeroInteraction:
    def test_no_counterexamples(self):
        tally = CheckTally()
        check_zero_interaction(tally)
        checks = dict((c.name, c) for c in tally.checks())
        for name in ("zero_interaction_ard", "zero_interaction_weak"):
            assert checks[name].antecedents > 0
            assert checks[name].counterexamples == 0


class TestCheckTally:
    def test_merge_keeps_first_example(self):
        left, right = CheckTally(), CheckTally()
        left.record("strong_implies_ard", False, "left")
        right.record("strong_implies_ard", False, "right")
        right.tie("ls_iff_pearson")
        merged = left + right
        check = dict((c.name, c) for c in merged.checks())["strong_implies_ard"]
        assert (check.antecedents, check.counterexamples) == (2, 2)
        assert check.example == "left"
        assert dict((c.name, c) for c in merged.checks())["ls_iff_pearson"].ties_skipped == 1

    def test_every_check_reported(self):
        assert [c.name for c in CheckTally().checks()] == list(CHECKS)


class TestRunVerify:
    @pytest.fixture(scope="class")
    def report(self):
        return run_verify(n=3000, seed=7, workers=1)

    def test_passes(self, report):
        assert report.passed
        assert report.accepted == 3000
        for check in report.checks:
            if check.asserted:
                assert check.counterexamples == 0, check.description

    def test_antecedents(self, report):
        assert report.get("ls_agreement").antecedents == 3000
        assert report.get("strong_implies_ard").antecedents > 0
        assert report.get("pearson_implies_or").antecedents > 0
        assert report.get("bound_sampled").antecedents >= 3000

    def test_cornfield_is_informational(self, report):
        assert not report.get("cornfield_necessity").asserted

    def test_as_dict(self, report):
        data = report.as_dict()
        assert data["passed"] is True
        assert len(data["checks"]) == len(CHECKS)


@pytest.mark.slow
def test_full_property_suite():
    report = run_verify(n=100000, seed=7, workers=None)
    assert report.passed
