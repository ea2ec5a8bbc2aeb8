#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains random table generators for the unconditional (uniform on the
7-simplex) and conditional (uniform over tables with a given collapse)
simulation protocols.

All randomness flows through numpy PCG64 generators. Work chunk i of a run
seeded with s draws from the substream SeedSequence(s, spawn_key=(i,)), so
a table stream depends only on (seed, config, input) and never on the
number of workers.
"""

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Optional, Tuple

import numpy

from simpson import config
from simpson.conditions import PreconditionError
from simpson.logger import log
from simpson.tables import CollapsedTable, ContingencyTable, DegenerateTable, measures

# ratios this close to an integer are treated as that integer
RATIO_TOLERANCE = 1e-9

MAX_SEED = 2 ** 64


class RejectionBudgetExceeded(RuntimeError):
    """Custom exception class for samplers that reject too many tables."""

    def __init__(self, message, accepted=0, rejected=0):
        super(RejectionBudgetExceeded, self).__init__(message, accepted, rejected)
        self.accepted = accepted
        self.rejected = rejected

    def __str__(self):
        return str(self.args[0])


class TableFilter(enum.Enum):
    """Acceptance filters applied to sampled tables."""

    OR_XY_GT_1 = "or_xy"
    OR_XY_AND_OR_WY_GT_1 = "or_xy_or_wy"

    def accepts(self, table):
        """Returns True if a table, in its sampled W orientation, passes."""
        if table.margin("x", "y").cross_difference <= 0:
            return False
        if self is TableFilter.OR_XY_AND_OR_WY_GT_1:
            return table.margin("w", "y").cross_difference > 0
        return True


@dataclass(frozen=True)
class SimplexPoint:
    """Eight positive cell probabilities summing to one."""

    p: Tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(v) for v in self.p)
        if len(p) != 8:
            raise ValueError("simplex point needs 8 coordinates, got %d" % len(p))
        if any(v <= 0 for v in p):
            raise ValueError("simplex point coordinates must be positive")
        if abs(math.fsum(p) - 1.0) > 1e-12:
            raise ValueError("simplex point must sum to 1, got %r" % math.fsum(p))
        object.__setattr__(self, "p", p)

    @property
    def min(self):
        return min(self.p)


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = config.SEED
    filter: TableFilter = TableFilter.OR_XY_GT_1
    target_accepted: int = config.MIN_ACCEPTED
    max_rejections: Optional[int] = None

    def __post_init__(self):
        if not 0 <= int(self.seed) < MAX_SEED:
            raise ValueError("seed must be a 64-bit unsigned integer, got %r" % self.seed)
        if int(self.target_accepted) < 1:
            raise ValueError("target_accepted must be positive, got %r" % self.target_accepted)
        if self.max_rejections is not None and int(self.max_rejections) < 0:
            raise ValueError("max_rejections must be non-negative")
        if not isinstance(self.filter, TableFilter):
            object.__setattr__(self, "filter", TableFilter(self.filter))

    @property
    def rejection_budget(self):
        """Returns max_rejections, defaulting to a multiple of the target."""
        if self.max_rejections is not None:
            return int(self.max_rejections)
        return config.MAX_REJECTION_FACTOR * int(self.target_accepted)

    def with_target(self, target_accepted, max_rejections=None):
        return replace(self, target_accepted=target_accepted, max_rejections=max_rejections)

    def as_dict(self):
        return {
            "seed": int(self.seed),
            "filter": self.filter.value,
            "target_accepted": int(self.target_accepted),
            "max_rejections": self.rejection_budget,
        }


def make_rng(seed):
    """Returns a PCG64 generator for a seed."""
    return numpy.random.Generator(numpy.random.PCG64(seed))


def substream(seed, index):
    """
    Returns the generator for work chunk `index` of a run.

    Equivalent to SeedSequence(seed).spawn(k)[index] for any k > index.
    """
    sequence = numpy.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return numpy.random.Generator(numpy.random.PCG64(sequence))


class TableStream(object):
    """Iterable of accepted tables that keeps acceptance statistics."""

    def __init__(self, draw: Callable, cfg: SamplerConfig):
        """
        :param draw: callable returning a candidate table or None (reject).
        :param cfg: SamplerConfig instance.
        """
        super(TableStream, self).__init__()
        self.draw = draw
        self.cfg = cfg
        self.accepted = 0
        self.rejected = 0

    def __repr__(self):
        return "<TableStream accepted=%d rejected=%d>" % (self.accepted, self.rejected)

    def __iter__(self) -> Iterator[ContingencyTable]:
        budget = self.cfg.rejection_budget
        while self.accepted < self.cfg.target_accepted:
            table = self.draw()
            if table is not None and self.cfg.filter.accepts(table):
                self.accepted += 1
                yield table
                continue
            self.rejected += 1
            if self.rejected > budget:
                log.error(
                    "rejection budget exceeded: %d accepted, %d rejected",
                    self.accepted,
                    self.rejected,
                )
                raise RejectionBudgetExceeded(
                    "rejection budget of %d exceeded after %d accepted tables"
                    % (budget, self.accepted),
                    accepted=self.accepted,
                    rejected=self.rejected,
                )


def sample_simplex(rng) -> SimplexPoint:
    """
    Draws a uniform point on the open 7-simplex as 8 unit-rate exponential
    variates normalized by their sum (the flat Dirichlet law).

    :param rng: numpy Generator.
    :returns: SimplexPoint instance.
    """
    draws = rng.standard_exponential(8)
    while not draws.all():
        draws = rng.standard_exponential(8)
    return SimplexPoint(tuple(draws / draws.sum()))


def counts_from_point(point: SimplexPoint) -> ContingencyTable:
    """
    Converts a simplex point to counts: cell i is ceil(p_i / min(p)), so the
    smallest cell is 1 and the counts keep the point's ratios.

    :param point: SimplexPoint instance.
    :returns: ContingencyTable instance.
    """
    smallest = point.min
    counts = []
    for p in point.p:
        ratio = p / smallest
        nearest = round(ratio)
        if abs(ratio - nearest) <= RATIO_TOLERANCE * max(1.0, ratio):
            ratio = nearest
        counts.append(max(1, math.ceil(ratio)))
    return ContingencyTable(tuple(counts))


def sample_unconditional(cfg: SamplerConfig, rng) -> TableStream:
    """
    Streams tables built from uniform simplex points, keeping those that
    pass cfg.filter until cfg.target_accepted are yielded. W keeps its
    sampled labels.

    :param cfg: SamplerConfig instance.
    :param rng: numpy Generator.
    :returns: TableStream instance.
    """

    def draw():
        return counts_from_point(sample_simplex(rng))

    return TableStream(draw, cfg)


def check_collapsed(collapsed: CollapsedTable):
    """Raises PreconditionError unless every cell is positive and OR_XY > 1."""
    if min(collapsed.counts) < 1:
        raise PreconditionError(
            "collapsed table needs positive counts, got %s" % collapsed.to_text()
        )
    margin = collapsed.margin()
    if margin.cross_difference <= 0:
        raise PreconditionError("OR_XY = %.4f must exceed 1" % margin.odds_ratio())


def split_collapsed(collapsed: CollapsedTable, rng) -> ContingencyTable:
    """
    Splits each (x, y) cell between W=1 and W=0, drawing the W=1 share
    uniformly from 0..m independently per cell.

    :param collapsed: CollapsedTable instance.
    :param rng: numpy Generator.
    :returns: ContingencyTable that collapses back to `collapsed`.
    """
    highs = numpy.array(collapsed.counts, dtype=numpy.int64) + 1
    shares = rng.integers(0, highs)
    cells = {}
    for (x, y), m, k in zip(((0, 0), (0, 1), (1, 0), (1, 1)), collapsed.counts, shares):
        cells[(x, 1, y)] = int(k)
        cells[(x, 0, y)] = m - int(k)
    return ContingencyTable.from_cells(cells)


def sample_conditional(collapsed: CollapsedTable, cfg: SamplerConfig, rng) -> TableStream:
    """
    Streams tables drawn uniformly from those collapsing to `collapsed`, W
    in its sampled orientation. Splits that are not measure-complete are
    rejected.

    :param collapsed: CollapsedTable with positive counts and OR_XY > 1.
    :param cfg: SamplerConfig instance.
    :param rng: numpy Generator.
    :returns: TableStream instance.
    """
    check_collapsed(collapsed)

    def draw():
        table = split_collapsed(collapsed, rng)
        try:
            measures(table)
        except DegenerateTable as err:
            log.debug("rejecting split %s: %s", table.to_text(), err)
            return None
        return table

    return TableStream(draw, cfg)
