#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

import itertools
import math

import numpy
import pytest
from pytest import approx

from simpson.tables import (
    CELLS,
    CollapsedTable,
    ContingencyTable,
    DegenerateTable,
    Margin,
    TableFormatError,
    cell_index,
    collapse,
    measures,
    sum_tables,
)


def expanded_correlation(margin):
    """Product-moment correlation of the 0/1 vectors a margin summarizes."""
    pairs = [(0, 1)] * margin.a + [(1, 1)] * margin.b + [(0, 0)] * margin.c + [(1, 0)] * margin.d
    data = numpy.array(pairs, dtype=float)
    return numpy.corrcoef(data[:, 0], data[:, 1])[0, 1]


class TestCells:
    def test_flat_order(self):
        assert CELLS[0] == (0, 0, 0)
        assert CELLS[1] == (0, 0, 1)
        assert CELLS[7] == (1, 1, 1)
        for key in CELLS:
            assert CELLS[cell_index(*key)] == key

    def test_parse(self):
        table = ContingencyTable.from_text("7, 5,3,2,2,3,3,3")
        assert table.counts == (7, 5, 3, 2, 2, 3, 3, 3)
        assert table.to_text() == "7,5,3,2,2,3,3,3"

    @pytest.mark.parametrize(
        "text",
        ["1,2,3", "1,2,3,4,5,6,7,x", "1,2,3,4,5,6,7,-1", "0,0,0,0,0,0,0,0"],
    )
    def test_parse_errors(self, text):
        with pytest.raises(TableFormatError):
            ContingencyTable.from_text(text)

    def test_collapsed_reading_order(self, zika):
        assert zika.m(0, 1) == 501
        assert zika.m(1, 1) == 91
        assert zika.m(0, 0) == 16533
        assert zika.m(1, 0) == 1784
        assert zika.to_text() == "501,91,16533,1784"


class TestCollapse:
    def test_ones(self):
        assert collapse(ContingencyTable((1,) * 8)).counts == (2, 2, 2, 2)

    def test_small(self):
        table = ContingencyTable((7, 5, 3, 2, 2, 3, 3, 3))
        assert collapse(table).counts == (10, 7, 5, 6)

    def test_kidney(self, kidney):
        collapsed = collapse(kidney)
        assert collapsed.m(1, 1) == 289
        assert collapsed.counts == (77, 273, 61, 289)

    def test_linear(self, kidney):
        other = ContingencyTable((1, 2, 3, 4, 5, 6, 7, 8))
        summed = collapse(sum_tables([kidney, other]))
        expected = tuple(p + q for p, q in zip(collapse(kidney).counts, collapse(other).counts))
        assert summed.counts == expected


class TestMargin:
    def test_zika(self, zika):
        margin = zika.margin()
        assert margin.correlation() == approx(0.0328, abs=1e-4)
        assert margin.odds_ratio() == approx(1.6833, abs=1e-4)
        assert margin.relative_risk() == approx(1.6502, abs=1e-4)
        assert margin.risk_difference() == approx(0.01912, abs=1e-5)

    def test_hand_evaluated(self):
        margin = Margin(a=1, b=3, c=3, d=1)
        assert margin.odds_ratio() == 9
        assert margin.correlation() == approx(0.5)

    def test_independent(self):
        margin = Margin(1, 1, 1, 1)
        assert margin.correlation() == 0
        assert margin.odds_ratio() == 1
        assert margin.relative_risk() == 1
        assert margin.risk_difference() == 0

    def test_degenerate(self):
        with pytest.raises(DegenerateTable) as err:
            Margin(a=0, b=3, c=0, d=1, names=("x", "y")).risk(0)
        assert err.value.margin == "(X,Y)"
        with pytest.raises(DegenerateTable):
            Margin(a=0, b=3, c=2, d=1).odds_ratio()
        with pytest.raises(DegenerateTable):
            Margin(a=2, b=3, c=0, d=0).correlation()

    def test_correlation_matches_expanded_vectors(self):
        for a, b, c, d in itertools.product((1, 2, 5), repeat=4):
            margin = Margin(a, b, c, d)
            assert margin.correlation() == approx(expanded_correlation(margin), rel=1e-12, abs=1e-15)

    def test_signs_agree(self):
        for a, b, c, d in itertools.product(range(1, 5), repeat=4):
            margin = Margin(a, b, c, d)
            sign = numpy.sign(margin.cross_difference)
            assert numpy.sign(margin.risk_difference()) == sign
            assert numpy.sign(margin.correlation()) == sign
            assert numpy.sign(margin.odds_ratio() - 1) == sign

    def test_flip(self):
        margin = Margin(2, 5, 7, 3)
        flipped = margin.flip(0)
        assert flipped.risk_difference() == approx(-margin.risk_difference())
        assert flipped.odds_ratio() == approx(1.0 / margin.odds_ratio())
        assert flipped.correlation() == approx(-margin.correlation())
        assert margin.flip(1).correlation() == approx(-margin.correlation())

    def test_transpose(self):
        margin = Margin(2, 5, 7, 3, names=("x", "w"))
        assert margin.transpose().odds_ratio() == margin.odds_ratio()
        assert margin.transpose().correlation() == approx(margin.correlation())
        assert margin.transpose().names == ("w", "x")


class TestMeasures:
    def test_kidney(self, kidney):
        ms = measures(kidney)
        assert ms.r_xw == approx(0.5230, abs=1e-4)
        assert ms.r_wy == approx(0.2039, abs=1e-4)
        assert ms.r_xy == approx(0.0575, abs=1e-4)
        assert ms.or_xw == approx(270 * 263 / (87 * 80))
        assert ms.p_w1 == approx(0.51)
        assert ms.p_y_given_xw[1][1] == approx(234 / 270)
        assert ms.p_y_given_xw[0][0] == approx(192 / 263)

    def test_or_symmetric(self, kidney):
        ms = measures(kidney)
        assert ms.or_wx == ms.or_xw
        assert kidney.margin("w", "x").odds_ratio() == kidney.margin("x", "w").odds_ratio()

    def test_interaction(self, kidney):
        ms = measures(kidney)
        p = ms.p_y_given_xw
        assert ms.interaction == approx((p[1][1] - p[0][1]) - (p[1][0] - p[0][0]))

    def test_flip_x(self, kidney):
        ms = measures(kidney)
        flipped = measures(kidney.flip("x"))
        assert flipped.rd_xy == approx(-ms.rd_xy)
        assert flipped.or_xy == approx(1.0 / ms.or_xy)
        assert flipped.r_xy == approx(-ms.r_xy)

    def test_empty_stratum(self):
        table = ContingencyTable((0, 0, 1, 1, 1, 1, 1, 1))
        assert not table.is_measure_complete()
        with pytest.raises(DegenerateTable) as err:
            measures(table)
        assert "X=0, W=0" in str(err.value)

    def test_constant_outcome(self):
        table = ContingencyTable((3, 0, 2, 0, 1, 0, 4, 0))
        with pytest.raises(DegenerateTable):
            measures(table)

    def test_as_dict(self, kidney):
        data = measures(kidney).as_dict()
        assert data["p_y_given_xw"][0][1] == approx(81 / 87)
        assert math.isfinite(data["rr_wy"])
