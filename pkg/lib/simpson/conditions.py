#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains the six reversal-detection conditions and the odds ratio
threshold used by the case study.

Conditions assume a non-negative X-Y association. Single-table evaluation
and the property suite relabel W so it is non-negatively associated with
Y; simulations evaluate W as sampled. Every comparison is strict: equality
counts as the condition being absent.

The Cornfield condition's conjunction of relative risks is read as a
minimum: both RR_XW and RR_WY must exceed RR_XY.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from simpson.tables import ContingencyTable, DegenerateTable, MeasureSet

# condition names in reporting order
CONDITIONS = (
    "cornfield",
    "risk_ratio",
    "risk_difference",
    "pearson",
    "mixed",
    "odds_ratio",
)

LABELS = {
    "cornfield": "Cornfield",
    "risk_ratio": "Risk Ratio",
    "risk_difference": "Risk Difference",
    "pearson": "Pearson Correlation",
    "mixed": "Mixed",
    "odds_ratio": "Odds Ratio",
}


class PreconditionError(ValueError):
    """Custom exception class for inputs outside an operation's domain."""

    pass


@dataclass(frozen=True)
class Comparison:
    """One condition: present iff every lhs value exceeds its rhs value."""

    lhs: Tuple[float, ...]
    rhs: Tuple[float, ...]

    @property
    def present(self):
        return all(left > right for left, right in zip(self.lhs, self.rhs))

    def as_dict(self):
        def finite(values):
            return [v if math.isfinite(v) else None for v in values]

        return {"lhs": finite(self.lhs), "rhs": finite(self.rhs), "present": self.present}


@dataclass(frozen=True)
class ConditionProfile:
    """The six conditions with the numbers each one compared."""

    cornfield_cmp: Comparison
    risk_ratio_cmp: Comparison
    risk_difference_cmp: Comparison
    pearson_cmp: Comparison
    mixed_cmp: Comparison
    odds_ratio_cmp: Comparison

    @property
    def cornfield(self):
        return self.cornfield_cmp.present

    @property
    def risk_ratio(self):
        return self.risk_ratio_cmp.present

    @property
    def risk_difference(self):
        return self.risk_difference_cmp.present

    @property
    def pearson(self):
        return self.pearson_cmp.present

    @property
    def mixed(self):
        return self.mixed_cmp.present

    @property
    def odds_ratio(self):
        return self.odds_ratio_cmp.present

    def flags(self):
        """Returns condition presence as a tuple in CONDITIONS order."""
        return tuple(getattr(self, name) for name in CONDITIONS)

    def comparison(self, name):
        return getattr(self, name + "_cmp")

    def as_dict(self):
        return {name: self.comparison(name).as_dict() for name in CONDITIONS}


@dataclass(frozen=True)
class ThresholdResult:
    """Smallest OR_WX that makes the Odds Ratio Condition hold."""

    r_xy: float
    or_wy_bound: float
    t_y: float
    q: float
    required_or_wx: Optional[float]

    @property
    def attainable(self):
        return self.required_or_wx is not None

    def is_exceeded_by(self, or_wx):
        """Returns True if `or_wx` satisfies the condition at this bound."""
        return self.attainable and or_wx > self.required_or_wx

    def as_dict(self):
        return {
            "r_xy": self.r_xy,
            "or_wy_bound": self.or_wy_bound,
            "t_y": self.t_y,
            "q": self.q,
            "required_or_wx": self.required_or_wx,
            "attainable": self.attainable,
        }


def odds_ratio_factor(odds_ratio):
    """Returns (sqrt(OR) - 1) / (sqrt(OR) + 1), the bound on r for that OR."""
    root = math.sqrt(odds_ratio)
    return (root - 1.0) / (root + 1.0)


def canonicalize_w(table: ContingencyTable) -> ContingencyTable:
    """
    Swaps the labels of W iff RD_WY < 0, so the result has OR_WY >= 1 and
    r(W,Y) >= 0. Reversal phenomena do not change under this relabeling.

    :param table: ContingencyTable instance.
    :returns: ContingencyTable instance.
    """
    wy = table.margin("w", "y")
    if wy.a + wy.c == 0 or wy.b + wy.d == 0:
        raise DegenerateTable("degenerate margin (W,Y): W is constant", margin="(W,Y)")
    if wy.cross_difference < 0:
        return table.flip("w")
    return table


def canonicalize_x(table: ContingencyTable) -> ContingencyTable:
    """
    Swaps the labels of X iff RD_XY < 0, so the result has a non-negative
    X-Y association.

    :param table: ContingencyTable instance.
    :returns: ContingencyTable instance.
    """
    if table.margin("x", "y").cross_difference < 0:
        return table.flip("x")
    return table


def evaluate_conditions(ms: MeasureSet) -> ConditionProfile:
    """
    Evaluates the six conditions on the measures of a table.

    :param ms: MeasureSet with rd_xy >= 0.
    :returns: ConditionProfile instance.
    """
    if ms.rd_xy < 0:
        raise PreconditionError(
            "negative X-Y association (RD_XY = %.4f); relabel X first" % ms.rd_xy
        )

    rr_xy, rr_xw, rr_wy = ms.rr_xy, ms.rr_xw, ms.rr_wy

    cornfield = Comparison((min(rr_xw, rr_wy),), (rr_xy,))

    # the bound degenerates when the denominator is not positive
    denominator = rr_xw + rr_wy - 1.0
    if denominator > 0:
        risk_ratio = Comparison((rr_xw * rr_wy / denominator,), (rr_xy,))
    else:
        risk_ratio = Comparison((-math.inf,), (rr_xy,))

    risk_difference = Comparison(
        (min(ms.rd_xw, ms.rd_wy), max(ms.rd_xw, ms.rd_wy)),
        (ms.rd_xy, math.sqrt(ms.rd_xy)),
    )

    pearson = Comparison((ms.r_xw * ms.r_wy,), (ms.r_xy,))

    root_or, root_rr = math.sqrt(ms.or_xw), math.sqrt(rr_wy)
    if root_or + root_rr > 0:
        mixed = Comparison(
            (((math.sqrt(ms.or_xw * rr_wy) + 1.0) / (root_or + root_rr)) ** 2,), (rr_xy,)
        )
    else:
        mixed = Comparison((-math.inf,), (rr_xy,))

    odds_ratio = Comparison(
        (odds_ratio_factor(ms.or_wx) * odds_ratio_factor(ms.or_wy),), (ms.r_xy,)
    )

    return ConditionProfile(
        cornfield_cmp=cornfield,
        risk_ratio_cmp=risk_ratio,
        risk_difference_cmp=risk_difference,
        pearson_cmp=pearson,
        mixed_cmp=mixed,
        odds_ratio_cmp=odds_ratio,
    )


def required_or_wx(r_xy: float, or_wy_bound: float) -> ThresholdResult:
    """
    Inverts the Odds Ratio Condition: the OR_WX at which the condition's
    left-hand side equals r_xy when OR_WY is at its plausible bound.

        >>> required_or_wx(0.0328, 1.4).required_or_wx
        5.21...

    :param r_xy: observed correlation, 0 < r_xy < 1.
    :param or_wy_bound: upper bound on OR_WY, > 1.
    :returns: ThresholdResult; required_or_wx is None when unattainable.
    """
    if not 0.0 < r_xy < 1.0:
        raise PreconditionError("r_xy must lie in (0, 1), got %r" % r_xy)
    if not or_wy_bound > 1.0:
        raise PreconditionError("OR_WY bound must exceed 1, got %r" % or_wy_bound)

    t_y = odds_ratio_factor(or_wy_bound)
    q = r_xy / t_y
    if q >= 1.0:
        return ThresholdResult(r_xy, or_wy_bound, t_y, q, None)

    return ThresholdResult(r_xy, or_wy_bound, t_y, q, ((1.0 + q) / (1.0 - q)) ** 2)
