#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains reversal detection: Strong and Weak Simpson's Paradox, the
Adjusted Risk Difference Reversal and the Least-Squares Reversal.

P_xw below is P(Y=1 | X=x, W=w). The least-squares model regresses Y on an
intercept, X and W; a Least-Squares Reversal is a negative X coefficient.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy

from simpson import config
from simpson.tables import ContingencyTable, DegenerateTable


class CollinearPredictors(DegenerateTable):
    """Custom exception class for perfectly correlated X and W."""

    pass


@dataclass(frozen=True)
class LeastSquaresFit:
    """Coefficients of the fit Y ~ beta_0 + beta_x_given_w X + beta_w_given_x W."""

    beta_x_given_w: float
    beta_w_given_x: float
    beta_0: float

    def as_tuple(self):
        return (self.beta_x_given_w, self.beta_w_given_x, self.beta_0)


@dataclass(frozen=True)
class ReversalProfile:
    strong_simpson: bool
    weak_simpson: bool
    ard_reversal: bool
    ls_reversal: bool
    adjusted_rd: float
    adjusted_rr: float
    beta_x: float
    beta_x_given_w: float

    @property
    def any_stratum_reversed(self):
        """True when at least one W stratum reverses the X-Y association."""
        return self.strong_simpson or self.weak_simpson

    def as_dict(self):
        data = dict(
            (name, getattr(self, name)) for name in self.__dataclass_fields__
        )
        data["any_stratum_reversed"] = self.any_stratum_reversed
        return data


def _stratum_reversed(table, w):
    """Returns True if P_1w < P_0w, compared exactly on counts."""
    total_0, total_1 = table.stratum_total(0, w), table.stratum_total(1, w)
    for x, total in ((0, total_0), (1, total_1)):
        if total == 0:
            raise DegenerateTable(
                "degenerate stratum: no observations with X=%d, W=%d" % (x, w),
                margin="(X=%d,W=%d)" % (x, w),
            )
    return table.n(1, w, 1) * total_0 < table.n(0, w, 1) * total_1


def detect_simpson(table: ContingencyTable) -> Tuple[bool, bool]:
    """
    Detects Strong and Weak Simpson's Paradox.

    Strong: both strata reverse (P_11 < P_01 and P_10 < P_00).
    Weak: exactly one of the two strata reverses.

    :param table: ContingencyTable with four non-empty (x, w) strata.
    :returns: (strong, weak) tuple.
    """
    upper = _stratum_reversed(table, 1)
    lower = _stratum_reversed(table, 0)
    return (upper and lower, upper != lower)


def _weighted_risks(table):
    """Returns stratum-weighted risks for X=1 and X=0."""
    p = [[table.p_y(x, w) for w in (0, 1)] for x in (0, 1)]
    p_w1 = (table.stratum_total(0, 1) + table.stratum_total(1, 1)) / table.total
    weights = (1.0 - p_w1, p_w1)
    exposed = sum(weights[w] * p[1][w] for w in (0, 1))
    unexposed = sum(weights[w] * p[0][w] for w in (0, 1))
    return exposed, unexposed


def adjusted_risk_difference(table: ContingencyTable) -> float:
    """Returns P(W=1)(P_11 - P_01) + P(W=0)(P_10 - P_00)."""
    exposed, unexposed = _weighted_risks(table)
    return exposed - unexposed


def adjusted_relative_risk(table: ContingencyTable) -> float:
    """Returns the ratio of the stratum-weighted risks (infinite if P_0w = 0)."""
    exposed, unexposed = _weighted_risks(table)
    if unexposed == 0:
        return math.inf
    return exposed / unexposed


def _require_independent_predictors(table):
    xw = table.margin("x", "w")
    radicand = (xw.a + xw.c) * (xw.b + xw.d) * (xw.a + xw.b) * (xw.c + xw.d)
    if radicand and xw.cross_difference ** 2 == radicand:
        raise CollinearPredictors(
            "collinear predictors: |r(W,X)| = 1", margin="(X,W)"
        )
    return xw


def ls_coefficients(table: ContingencyTable) -> LeastSquaresFit:
    """
    Closed-form least-squares coefficients from correlations:

        beta_x_given_w = (s_Y / s_X) (r_XY - r_WX r_WY) / (1 - r_WX^2)

    and symmetrically for W, with beta_0 completing the fit at the means.

    :param table: ContingencyTable with X, W, Y non-constant.
    :returns: LeastSquaresFit instance.
    """
    xw = _require_independent_predictors(table)
    r_xw = xw.correlation()
    r_xy = table.margin("x", "y").correlation()
    r_wy = table.margin("w", "y").correlation()

    n = table.total
    mean_x = sum(table.stratum_total(1, w) for w in (0, 1)) / n
    mean_w = sum(table.stratum_total(x, 1) for x in (0, 1)) / n
    mean_y = sum(table.n(x, w, 1) for x in (0, 1) for w in (0, 1)) / n
    s_x = math.sqrt(mean_x * (1.0 - mean_x))
    s_w = math.sqrt(mean_w * (1.0 - mean_w))
    s_y = math.sqrt(mean_y * (1.0 - mean_y))

    shared = 1.0 - r_xw ** 2
    beta_x = (s_y / s_x) * (r_xy - r_xw * r_wy) / shared
    beta_w = (s_y / s_w) * (r_wy - r_xw * r_xy) / shared
    beta_0 = mean_y - beta_x * mean_x - beta_w * mean_w

    return LeastSquaresFit(beta_x, beta_w, beta_0)


def _exact_determinant(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def ls_oracle(table: ContingencyTable) -> LeastSquaresFit:
    """
    Least-squares coefficients by solving the 3x3 normal equations of the
    sum of squares weighted by (x, w) stratum totals. Independent of
    ls_coefficients, and agrees with it to within config.LS_TOLERANCE.

    :param table: ContingencyTable instance.
    :returns: LeastSquaresFit instance.
    """
    gram = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
    moments = [0, 0, 0]
    for x in (0, 1):
        for w in (0, 1):
            weight = table.stratum_total(x, w)
            ones = table.n(x, w, 1)
            row = (1, x, w)
            for i in range(3):
                moments[i] += row[i] * ones
                for j in range(3):
                    gram[i][j] += row[i] * row[j] * weight

    if _exact_determinant(gram) == 0:
        raise CollinearPredictors(
            "collinear predictors: normal equations are singular", margin="(X,W)"
        )

    solution = numpy.linalg.solve(
        numpy.array(gram, dtype=float), numpy.array(moments, dtype=float)
    )
    beta_0, beta_x, beta_w = (float(v) for v in solution)
    return LeastSquaresFit(beta_x, beta_w, beta_0)


def detect_reversals(table: ContingencyTable) -> ReversalProfile:
    """
    Evaluates all four reversal phenomena on a table.

    :param table: measure-complete ContingencyTable.
    :returns: ReversalProfile instance.
    """
    strong, weak = detect_simpson(table)
    adjusted_rd = adjusted_risk_difference(table)
    fit = ls_coefficients(table)
    beta_x = table.margin("x", "y").risk_difference()

    return ReversalProfile(
        strong_simpson=strong,
        weak_simpson=weak,
        ard_reversal=adjusted_rd < 0,
        ls_reversal=fit.beta_x_given_w < -config.TIE_EPSILON,
        adjusted_rd=adjusted_rd,
        adjusted_rr=adjusted_relative_risk(table),
        beta_x=beta_x,
        beta_x_given_w=fit.beta_x_given_w,
    )


def zero_interaction_table(size, y00, y01, effect, weights=(1, 1, 1, 1)):
    """
    Builds a table whose within-stratum risk differences are identical,
    so the interaction is exactly zero.

    Stratum (x, w) holds k * size observations with k taken from `weights`
    in (0,0), (0,1), (1,0), (1,1) order. Unexposed strata have y00 and y01
    outcomes per `size`, exposed strata `effect` more.

    :param size: base stratum size.
    :param y00: outcomes per `size` in stratum X=0, W=0.
    :param y01: outcomes per `size` in stratum X=0, W=1.
    :param effect: within-stratum difference in outcomes per `size`.
    :param weights: stratum size multipliers.
    :returns: ContingencyTable instance.
    """
    ones = {(0, 0): y00, (0, 1): y01, (1, 0): y00 + effect, (1, 1): y01 + effect}
    cells = {}
    for (x, w), k in zip(((0, 0), (0, 1), (1, 0), (1, 1)), weights):
        y1 = ones[(x, w)]
        if not 0 <= y1 <= size:
            raise ValueError("stratum (%d,%d) needs 0 <= outcomes <= size" % (x, w))
        cells[(x, w, 1)] = k * y1
        cells[(x, w, 0)] = k * (size - y1)
    return ContingencyTable.from_cells(cells)
