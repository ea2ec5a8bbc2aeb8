#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains the Monte Carlo estimators of P(reversal | condition) and
P(no reversal | no condition), their standard errors, and the case-study
analysis of a collapsed 2x2 table.

The "weak" reversal column counts tables where at least one W stratum
reverses the X-Y association, which is how the published tables tally
Weak Simpson's Paradox (strong tables included).

Tables are tallied with W labeled as sampled; W is never relabeled before
the conditions are evaluated.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy

from simpson import config
from simpson import sampling
from simpson import threads
from simpson import worker
from simpson.conditions import (
    CONDITIONS,
    PreconditionError,
    ThresholdResult,
    evaluate_conditions,
    required_or_wx,
)
from simpson.logger import log, log_settings
from simpson.reversals import detect_reversals
from simpson.sampling import SamplerConfig, TableFilter
from simpson.tables import CollapsedTable, DegenerateTable, measures

REVERSALS = ("strong", "ard", "weak")

REVERSAL_LABELS = {
    "strong": "Strong Simpson",
    "ard": "Adjusted Risk Difference",
    "weak": "Weak Simpson",
}

# conditional-probability families
GIVEN_CONDITION = "given_condition"
NOT_GIVEN_NOT = "not_given_not_condition"
FAMILIES = (GIVEN_CONDITION, NOT_GIVEN_NOT)

_CONDITION_INDEX = numpy.arange(len(CONDITIONS))[:, None]
_REVERSAL_INDEX = numpy.arange(len(REVERSALS))[None, :]


def reversal_flags(profile):
    """Returns (strong, ard, weak) flags of a ReversalProfile."""
    return (profile.strong_simpson, profile.ard_reversal, profile.any_stratum_reversed)


class TallyGrid(object):
    """
    Integer tallies per (condition, reversal) pair:

        counts[c, r, 1, 1] condition and reversal      (n11)
        counts[c, r, 1, 0] condition, no reversal      (n10)
        counts[c, r, 0, 1] no condition, reversal      (n01)
        counts[c, r, 0, 0] neither                     (n00)

    plus the (ard, ls) overlap counts and acceptance statistics.
    """

    def __init__(self):
        super(TallyGrid, self).__init__()
        self.counts = numpy.zeros((len(CONDITIONS), len(REVERSALS), 2, 2), dtype=numpy.int64)
        self.overlap = numpy.zeros((2, 2), dtype=numpy.int64)
        self.accepted = 0
        self.rejected = 0

    def __repr__(self):
        return "<TallyGrid accepted=%d rejected=%d>" % (self.accepted, self.rejected)

    def __add__(self, other):
        merged = TallyGrid()
        merged.counts = self.counts + other.counts
        merged.overlap = self.overlap + other.overlap
        merged.accepted = self.accepted + other.accepted
        merged.rejected = self.rejected + other.rejected
        return merged

    def add(self, condition_flags, reversals, ard=False, ls=False):
        """Records one accepted table."""
        present = numpy.array(condition_flags, dtype=numpy.intp)[:, None]
        reversed_ = numpy.array(reversals, dtype=numpy.intp)[None, :]
        self.counts[_CONDITION_INDEX, _REVERSAL_INDEX, present, reversed_] += 1
        self.overlap[int(ard), int(ls)] += 1
        self.accepted += 1

    def add_table(self, table):
        """Evaluates conditions and reversals of a table as sampled."""
        profile = evaluate_conditions(measures(table))
        reversal = detect_reversals(table)
        self.add(
            profile.flags(),
            reversal_flags(reversal),
            ard=reversal.ard_reversal,
            ls=reversal.ls_reversal,
        )

    def cell(self, condition, reversal):
        """Returns (n11, n10, n01, n00) for a condition and reversal name."""
        c, r = CONDITIONS.index(condition), REVERSALS.index(reversal)
        grid = self.counts[c, r]
        return (int(grid[1, 1]), int(grid[1, 0]), int(grid[0, 1]), int(grid[0, 0]))


@dataclass(frozen=True)
class Estimate:
    """A conditional proportion with its standard error."""

    condition: str
    reversal: str
    family: str
    hits: int
    n: int

    @property
    def p_hat(self) -> Optional[float]:
        if self.n == 0:
            return None
        return self.hits / self.n

    @property
    def se(self) -> Optional[float]:
        p = self.p_hat
        if p is None:
            return None
        return math.sqrt(p * (1.0 - p) / self.n)

    def as_dict(self):
        return {
            "condition": self.condition,
            "reversal": self.reversal,
            "family": self.family,
            "p_hat": self.p_hat,
            "se": self.se,
            "n": self.n,
        }


@dataclass(frozen=True)
class SimulationReport:
    kind: str
    sampler: SamplerConfig
    accepted: int
    rejected: int
    estimates: Tuple[Estimate, ...]
    overlap: Tuple[Tuple[int, int], Tuple[int, int]]
    source: Optional[CollapsedTable] = None

    @classmethod
    def from_tally(cls, kind, tally, cfg, source=None):
        estimates = []
        for family in FAMILIES:
            for condition in CONDITIONS:
                for reversal in REVERSALS:
                    n11, n10, n01, n00 = tally.cell(condition, reversal)
                    if family == GIVEN_CONDITION:
                        hits, n = n11, n11 + n10
                    else:
                        hits, n = n00, n01 + n00
                    estimates.append(Estimate(condition, reversal, family, hits, n))
        overlap = tuple(tuple(int(v) for v in row) for row in tally.overlap)
        return cls(
            kind=kind,
            sampler=cfg,
            accepted=tally.accepted,
            rejected=tally.rejected,
            estimates=tuple(estimates),
            overlap=overlap,
            source=source,
        )

    def get(self, condition, reversal, family=GIVEN_CONDITION) -> Estimate:
        for estimate in self.estimates:
            if (estimate.condition, estimate.reversal, estimate.family) == (
                condition,
                reversal,
                family,
            ):
                return estimate
        raise KeyError((condition, reversal, family))

    @property
    def acceptance_rate(self):
        return self.accepted / (self.accepted + self.rejected)

    def metadata(self):
        data = {
            "kind": self.kind,
            "seed": int(self.sampler.seed),
            "filter": self.sampler.filter.value,
            "accepted": self.accepted,
            "rejected": self.rejected,
            "acceptance_rate": self.acceptance_rate,
            "source": self.source.to_text() if self.source else None,
            "ard_ls_overlap": {
                "neither": self.overlap[0][0],
                "ls_only": self.overlap[0][1],
                "ard_only": self.overlap[1][0],
                "both": self.overlap[1][1],
            },
        }
        return data


@dataclass(frozen=True)
class ChunkTask:
    """Picklable description of one chunk of a simulation."""

    kind: str
    seed: int
    filter: TableFilter
    chunk: worker.ChunkSpec
    source: Optional[Tuple[int, ...]] = None


def chunk_stream(task: ChunkTask):
    """Returns the table stream of a chunk from its own substream."""
    cfg = SamplerConfig(
        seed=task.seed,
        filter=task.filter,
        target_accepted=task.chunk.target,
        max_rejections=task.chunk.max_rejections,
    )
    rng = sampling.substream(task.seed, task.chunk.index)
    if task.kind == "conditional":
        return sampling.sample_conditional(CollapsedTable(task.source), cfg, rng)
    return sampling.sample_unconditional(cfg, rng)


def tally_chunk(task: ChunkTask) -> TallyGrid:
    """Runs one chunk and returns its tallies."""
    tally = TallyGrid()
    stream = chunk_stream(task)
    for table in stream:
        tally.add_table(table)
    tally.rejected = stream.rejected
    log.debug("chunk %d done: %r", task.chunk.index, stream)
    return tally


def plan_tasks(kind, cfg, source=None):
    chunks = worker.plan_chunks(cfg.target_accepted, cfg.rejection_budget)
    counts = source.counts if source is not None else None
    return [ChunkTask(kind, int(cfg.seed), cfg.filter, chunk, counts) for chunk in chunks]


def _simulate(kind, cfg, source=None, workers=None, allow_small=False):
    if cfg.target_accepted < config.MIN_ACCEPTED and not allow_small:
        raise PreconditionError(
            "simulations need more than %d accepted tables, got %d"
            % (config.MIN_ACCEPTED - 1, cfg.target_accepted)
        )

    tasks = plan_tasks(kind, cfg, source)
    log_settings(
        "%s simulation" % kind,
        n=cfg.target_accepted,
        seed=cfg.seed,
        filter=cfg.filter.value,
        chunks=len(tasks),
    )

    with threads.ProgressMonitor(kind, len(tasks)) as monitor:
        results = worker.run_chunks(tally_chunk, tasks, workers=workers, monitor=monitor)

    tally = TallyGrid()
    for result in results:
        tally = tally + result

    if tally.rejected > cfg.rejection_budget:
        raise sampling.RejectionBudgetExceeded(
            "rejection budget of %d exceeded" % cfg.rejection_budget,
            accepted=tally.accepted,
            rejected=tally.rejected,
        )

    log.info("accepted %d tables, rejected %d", tally.accepted, tally.rejected)
    return SimulationReport.from_tally(kind, tally, cfg, source)


def run_unconditional(cfg: SamplerConfig, workers=None, allow_small=False) -> SimulationReport:
    """
    Estimates both conditional-probability families over tables drawn
    uniformly from the 7-simplex.

    :param cfg: SamplerConfig instance.
    :param workers: worker processes (default $SIMPSON_THREADS).
    :param allow_small: permit fewer than config.MIN_ACCEPTED tables.
    :returns: SimulationReport instance.
    """
    return _simulate("unconditional", cfg, workers=workers, allow_small=allow_small)


def run_conditional(
    collapsed: CollapsedTable, cfg: SamplerConfig, workers=None, allow_small=False
) -> SimulationReport:
    """
    Estimates both families over tables drawn uniformly from those that
    collapse to `collapsed`. Splits are tallied with W as sampled; pass
    TableFilter.OR_XY_AND_OR_WY_GT_1 to keep only splits with OR_WY > 1.

    :param collapsed: CollapsedTable with positive counts and OR_XY > 1.
    :param cfg: SamplerConfig instance.
    :param workers: worker processes (default $SIMPSON_THREADS).
    :param allow_small: permit fewer than config.MIN_ACCEPTED tables.
    :returns: SimulationReport instance.
    """
    sampling.check_collapsed(collapsed)
    return _simulate(
        "conditional", cfg, source=collapsed, workers=workers, allow_small=allow_small
    )


@dataclass(frozen=True)
class CaseReport:
    """Odds ratio sensitivity analysis of an observed 2x2 table."""

    collapsed: CollapsedTable
    r_xy: float
    rr_xy: float
    or_xy: float
    rd_xy: float
    threshold: ThresholdResult
    or_wx_plausible: Optional[float] = None
    simulation: Optional[SimulationReport] = None

    @property
    def reversal_plausible(self) -> Optional[bool]:
        """
        Whether a plausible upper bound on OR_WX reaches the threshold;
        None when no bound was given.
        """
        if self.or_wx_plausible is None:
            return None
        return self.threshold.is_exceeded_by(self.or_wx_plausible)

    def interpretation(self) -> List[str]:
        t = self.threshold
        lines = []
        if not t.attainable:
            lines.append(
                "No OR_WX can satisfy the Odds Ratio Condition with OR_WY <= %.4f: "
                "a confounder this weakly tied to Y cannot reverse r_XY = %.4f."
                % (t.or_wy_bound, t.r_xy)
            )
        else:
            lines.append(
                "A confounder with OR_WY <= %.4f reverses the association only if "
                "OR_WX > %.4f." % (t.or_wy_bound, t.required_or_wx)
            )
        if self.reversal_plausible is False:
            lines.append(
                "The plausible OR_WX <= %.4f falls short, so a reversal is unlikely."
                % self.or_wx_plausible
            )
        elif self.reversal_plausible:
            lines.append(
                "The plausible OR_WX <= %.4f reaches the threshold; a reversal "
                "cannot be ruled out." % self.or_wx_plausible
            )
        return lines

    def as_dict(self):
        return {
            "collapsed": self.collapsed.to_text(),
            "r_xy": self.r_xy,
            "rr_xy": self.rr_xy,
            "or_xy": self.or_xy,
            "rd_xy": self.rd_xy,
            "threshold": self.threshold.as_dict(),
            "or_wx_plausible": self.or_wx_plausible,
            "reversal_plausible": self.reversal_plausible,
            "interpretation": self.interpretation(),
        }


def analyze_case(
    collapsed: CollapsedTable,
    or_wy_bound: float,
    cfg: Optional[SamplerConfig] = None,
    or_wx_plausible: Optional[float] = None,
    workers=None,
    allow_small=False,
) -> CaseReport:
    """
    Runs the odds ratio sensitivity analysis on an observed 2x2 table:
    observed measures, the OR_WX needed for a reversal at the OR_WY bound,
    and optionally a conditional simulation.

    :param collapsed: CollapsedTable with positive counts and OR_XY > 1.
    :param or_wy_bound: plausible upper bound on OR_WY, > 1.
    :param cfg: SamplerConfig to also run a conditional simulation.
    :param or_wx_plausible: plausible upper bound on OR_WX (optional).
    :param workers: worker processes for the simulation.
    :param allow_small: permit a small simulation.
    :returns: CaseReport instance.
    """
    sampling.check_collapsed(collapsed)
    margin = collapsed.margin()
    try:
        r_xy = margin.correlation()
        rr_xy = margin.relative_risk()
        or_xy = margin.odds_ratio()
        rd_xy = margin.risk_difference()
    except DegenerateTable as err:
        raise PreconditionError(str(err))

    threshold = required_or_wx(r_xy, or_wy_bound)
    log.info("r_XY=%.4f required OR_WX=%s", r_xy, threshold.required_or_wx)

    simulation = None
    if cfg is not None:
        simulation = run_conditional(collapsed, cfg, workers=workers, allow_small=allow_small)

    return CaseReport(
        collapsed=collapsed,
        r_xy=r_xy,
        rr_xy=rr_xy,
        or_xy=or_xy,
        rd_xy=rd_xy,
        threshold=threshold,
        or_wx_plausible=or_wx_plausible,
        simulation=simulation,
    )
