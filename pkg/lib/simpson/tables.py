#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains 2x2x2 and 2x2 contingency table classes and association measures.

Cells of a full table are indexed by (x, w, y) with y fastest, so the flat
index of a cell is 4x + 2w + y. X is the exposure, W the covariate and Y the
outcome. Collapsed tables are indexed by (x, y), again with y fastest.
"""

import math
import itertools
from dataclasses import dataclass
from typing import Iterable, Tuple

VARIABLES = ("x", "w", "y")

# flat (x, w, y) cell order, y fastest
CELLS = tuple(itertools.product((0, 1), repeat=3))


class DegenerateTable(ValueError):
    """Custom exception class for tables missing a required margin."""

    def __init__(self, message, margin=None):
        super(DegenerateTable, self).__init__(message, margin)
        self.margin = margin

    def __str__(self):
        return str(self.args[0])


class TableFormatError(ValueError):
    """Custom exception class for malformed table text."""

    pass


def cell_index(x, w, y):
    """Returns the flat index of cell (x, w, y)."""
    return 4 * x + 2 * w + y


def parse_counts(text, size):
    """
    Parses comma separated non-negative integers.

    :param text: e.g. "501,91,16533,1784".
    :param size: expected number of values.
    :returns: tuple of ints.
    """
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != size:
        raise TableFormatError("expected %d comma separated counts, got %d" % (size, len(parts)))
    try:
        counts = tuple(int(p) for p in parts)
    except ValueError:
        raise TableFormatError("counts must be integers: %s" % text)
    if any(c < 0 for c in counts):
        raise TableFormatError("counts must be non-negative: %s" % text)
    return counts


def _check_counts(counts, size, name):
    counts = tuple(int(c) for c in counts)
    if len(counts) != size:
        raise TableFormatError("%s needs %d counts, got %d" % (name, size, len(counts)))
    if any(c < 0 for c in counts):
        raise TableFormatError("%s counts must be non-negative" % name)
    if sum(counts) < 1:
        raise TableFormatError("%s must contain at least one observation" % name)
    return counts


@dataclass(frozen=True)
class Margin:
    """
    A 2x2 table of counts for the ordered pair (A, B), A explanatory.

    Uses the a, b, c, d convention of the correlation closed form:

        a = #(A=0, B=1)   b = #(A=1, B=1)
        c = #(A=0, B=0)   d = #(A=1, B=0)
    """

    a: int
    b: int
    c: int
    d: int
    names: Tuple[str, str] = ("A", "B")

    @classmethod
    def from_cells(cls, n00, n01, n10, n11, names=("A", "B")):
        """Builds a margin from counts indexed [a][b]."""
        return cls(a=n01, b=n11, c=n00, d=n10, names=tuple(names))

    @property
    def label(self):
        return "(%s,%s)" % tuple(v.upper() for v in self.names)

    @property
    def total(self):
        return self.a + self.b + self.c + self.d

    @property
    def cross_difference(self):
        """Returns bc - ad; its sign is the sign of the association."""
        return self.b * self.c - self.a * self.d

    def _fail(self, what):
        raise DegenerateTable(
            "degenerate margin %s: %s" % (self.label, what), margin=self.label
        )

    def _require_nonconstant(self):
        A, B = (v.upper() for v in self.names)
        if self.a + self.c == 0:
            self._fail("%s=0 is empty" % A)
        if self.b + self.d == 0:
            self._fail("%s=1 is empty" % A)

    def risk(self, level):
        """Returns P(B=1 | A=level)."""
        self._require_nonconstant()
        if level:
            return self.b / (self.b + self.d)
        return self.a / (self.a + self.c)

    def relative_risk(self):
        """Returns P(B=1|A=1) / P(B=1|A=0)."""
        self._require_nonconstant()
        if self.a == 0:
            self._fail("P(%s=1|%s=0) is zero" % (self.names[1].upper(), self.names[0].upper()))
        return (self.b * (self.a + self.c)) / (self.a * (self.b + self.d))

    def risk_difference(self):
        """Returns P(B=1|A=1) - P(B=1|A=0)."""
        self._require_nonconstant()
        return self.cross_difference / ((self.a + self.c) * (self.b + self.d))

    def odds_ratio(self):
        """Returns bc / ad, which does not depend on the pair's order."""
        if self.a == 0 or self.d == 0:
            self._fail("odds ratio denominator is zero")
        return (self.b * self.c) / (self.a * self.d)

    def correlation(self):
        """Returns the Pearson correlation of the two 0/1 variables."""
        self._require_nonconstant()
        if self.a + self.b == 0 or self.c + self.d == 0:
            self._fail("%s is constant" % self.names[1].upper())
        radicand = (self.a + self.c) * (self.b + self.d) * (self.a + self.b) * (self.c + self.d)
        return self.cross_difference / math.sqrt(radicand)

    def transpose(self):
        """Returns the margin for the pair (B, A)."""
        return Margin(a=self.d, b=self.b, c=self.c, d=self.a, names=self.names[::-1])

    def flip(self, which=0):
        """Returns the margin with the levels of A (0) or B (1) swapped."""
        if which == 0:
            return Margin(a=self.b, b=self.a, c=self.d, d=self.c, names=self.names)
        return Margin(a=self.c, b=self.d, c=self.a, d=self.b, names=self.names)


@dataclass(frozen=True)
class ContingencyTable:
    """Eight (x, w, y) cell counts in flat order, y fastest."""

    counts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", _check_counts(self.counts, 8, "table"))

    def __repr__(self):
        return "<ContingencyTable %s>" % self.to_text()

    def __add__(self, other):
        return ContingencyTable(tuple(p + q for p, q in zip(self.counts, other.counts)))

    @classmethod
    def from_text(cls, text):
        """Parses 8 comma separated counts in (x, w, y) order."""
        return cls(parse_counts(text, 8))

    @classmethod
    def from_cells(cls, cells):
        """Builds a table from a {(x, w, y): count} mapping."""
        return cls(tuple(cells.get(key, 0) for key in CELLS))

    def to_text(self):
        return ",".join(str(c) for c in self.counts)

    def n(self, x, w, y):
        return self.counts[cell_index(x, w, y)]

    @property
    def total(self):
        return sum(self.counts)

    def stratum_total(self, x, w):
        """Returns the number of observations with X=x and W=w."""
        return self.n(x, w, 0) + self.n(x, w, 1)

    def p_y(self, x, w):
        """Returns P(Y=1 | X=x, W=w)."""
        total = self.stratum_total(x, w)
        if total == 0:
            raise DegenerateTable(
                "degenerate stratum: no observations with X=%d, W=%d" % (x, w),
                margin="(X=%d,W=%d)" % (x, w),
            )
        return self.n(x, w, 1) / total

    def margin(self, first, second):
        """
        Returns the 2x2 margin for an ordered pair of variables.

            >>> table.margin("x", "y").odds_ratio()

        :param first: explanatory variable name, one of x, w, y.
        :param second: response variable name.
        :returns: Margin instance.
        """
        i, j = VARIABLES.index(first), VARIABLES.index(second)
        cells = [[0, 0], [0, 0]]
        for key, count in zip(CELLS, self.counts):
            cells[key[i]][key[j]] += count
        return Margin.from_cells(
            cells[0][0], cells[0][1], cells[1][0], cells[1][1], names=(first, second)
        )

    def flip(self, variable):
        """Returns a copy with the two levels of `variable` swapped."""
        i = VARIABLES.index(variable)
        cells = {}
        for key, count in zip(CELLS, self.counts):
            key = list(key)
            key[i] = 1 - key[i]
            cells[tuple(key)] = count
        return ContingencyTable.from_cells(cells)

    def is_measure_complete(self):
        """Returns True if measures() succeeds on this table."""
        try:
            measures(self)
        except DegenerateTable:
            return False
        return True


@dataclass(frozen=True)
class CollapsedTable:
    """Four (x, y) cell counts in flat order, y fastest."""

    counts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", _check_counts(self.counts, 4, "collapsed table"))

    def __repr__(self):
        return "<CollapsedTable %s>" % self.to_text()

    @classmethod
    def from_abcd(cls, a, b, c, d):
        """
        Builds a collapsed table from counts in reading order

            (x=0, y=1), (x=1, y=1), (x=0, y=0), (x=1, y=0)

        which is the order used on the command line.
        """
        return cls((c, a, d, b))

    @classmethod
    def from_text(cls, text):
        """Parses 4 comma separated counts in a, b, c, d reading order."""
        return cls.from_abcd(*parse_counts(text, 4))

    def to_text(self):
        """Returns the counts in a, b, c, d reading order."""
        m = self.margin()
        return ",".join(str(v) for v in (m.a, m.b, m.c, m.d))

    def m(self, x, y):
        return self.counts[2 * x + y]

    @property
    def total(self):
        return sum(self.counts)

    def margin(self):
        """Returns the (X, Y) margin."""
        return Margin.from_cells(*self.counts, names=("x", "y"))


@dataclass(frozen=True)
class MeasureSet:
    """Bivariate and conditional association measures of a full table."""

    p_y_given_xw: Tuple[Tuple[float, float], Tuple[float, float]]
    rr_xy: float
    rr_xw: float
    rr_wy: float
    rd_xy: float
    rd_xw: float
    rd_wy: float
    or_xy: float
    or_xw: float
    or_wy: float
    r_xy: float
    r_xw: float
    r_wy: float
    p_w1: float
    interaction: float

    @property
    def or_wx(self):
        return self.or_xw

    @property
    def r_wx(self):
        return self.r_xw

    def as_dict(self):
        data = {
            "p_y_given_xw": [list(row) for row in self.p_y_given_xw],
        }
        for name in self.__dataclass_fields__:
            if name != "p_y_given_xw":
                data[name] = getattr(self, name)
        return data


def collapse(table: ContingencyTable) -> CollapsedTable:
    """Sums a full table over W."""
    return CollapsedTable(
        tuple(table.n(x, 0, y) + table.n(x, 1, y) for x in (0, 1) for y in (0, 1))
    )


def measures(table: ContingencyTable) -> MeasureSet:
    """
    Computes every bivariate and conditional measure of a table.

    Products of counts stay integers and are converted to floats only at
    the final division or square root. Raises DegenerateTable naming the
    first margin with a zero denominator or constant variable.

    :param table: ContingencyTable instance.
    :returns: MeasureSet instance.
    """
    p = tuple(tuple(table.p_y(x, w) for w in (0, 1)) for x in (0, 1))
    xy = table.margin("x", "y")
    xw = table.margin("x", "w")
    wy = table.margin("w", "y")
    p_w1 = (table.stratum_total(0, 1) + table.stratum_total(1, 1)) / table.total

    return MeasureSet(
        p_y_given_xw=p,
        rr_xy=xy.relative_risk(),
        rr_xw=xw.relative_risk(),
        rr_wy=wy.relative_risk(),
        rd_xy=xy.risk_difference(),
        rd_xw=xw.risk_difference(),
        rd_wy=wy.risk_difference(),
        or_xy=xy.odds_ratio(),
        or_xw=xw.odds_ratio(),
        or_wy=wy.odds_ratio(),
        r_xy=xy.correlation(),
        r_xw=xw.correlation(),
        r_wy=wy.correlation(),
        p_w1=p_w1,
        interaction=(p[1][1] - p[0][1]) - (p[1][0] - p[0][0]),
    )


def sum_tables(tables: Iterable[ContingencyTable]) -> ContingencyTable:
    """Returns the cellwise sum of one or more tables."""
    tables = iter(tables)
    result = next(tables)
    for table in tables:
        result = result + table
    return result
