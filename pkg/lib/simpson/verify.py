#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains the property suite behind `simpson verify`.

Every check counts the tables (or margins) satisfying its antecedent and
the counterexamples among them. Sampled checks run on OR_XY > 1 tables
drawn in deterministic chunks, with W relabeled so RD_WY >= 0. The correlation
bound is also checked exhaustively over small margins, and the interaction checks
run on constructed tables whose stratum risk differences are identical.
"""

import itertools
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional, Tuple

from simpson import config
from simpson import sampling
from simpson import simulation
from simpson import threads
from simpson import worker
from simpson.conditions import canonicalize_w, evaluate_conditions, odds_ratio_factor
from simpson.logger import log, log_settings
from simpson.reversals import (
    adjusted_risk_difference,
    detect_reversals,
    detect_simpson,
    ls_oracle,
    zero_interaction_table,
)
from simpson.sampling import SamplerConfig, TableFilter
from simpson.tables import Margin, measures

# largest count used by the exhaustive correlation bound check
GRID_MAX = 6

# relative slack allowed on the sampled correlation bound
BOUND_TOLERANCE = 1e-12

CHECKS = OrderedDict(
    [
        ("strong_implies_ard", ("Strong Simpson => ARD reversal", True)),
        ("ard_implies_stratum", ("ARD reversal => some stratum reversed", True)),
        ("strong_implies_ls", ("Strong Simpson => least-squares reversal", True)),
        ("ls_iff_pearson", ("least-squares reversal <=> Pearson condition", True)),
        ("pearson_implies_or", ("Pearson condition => Odds Ratio condition", True)),
        ("strong_implies_or", ("Strong Simpson => Odds Ratio condition", True)),
        ("ard_iff_adjusted_rr", ("ARD reversal <=> adjusted RR < 1", True)),
        ("ls_agreement", ("closed form and normal equation slopes agree", True)),
        ("bound_sampled", ("r <= (sqrt(OR)-1)/(sqrt(OR)+1) on sampled margins", True)),
        ("bound_grid", ("r < (sqrt(OR)-1)/(sqrt(OR)+1) unless a=d, b=c (counts 1..%d)" % GRID_MAX, True)),
        ("zero_interaction_ard", ("zero interaction: ARD reversal <=> Strong Simpson", True)),
        ("zero_interaction_weak", ("zero interaction: no single-stratum reversal", True)),
        ("cornfield_necessity", ("RR_XY > 1, RR_XW > 1, ARD reversal => Cornfield", False)),
    ]
)


@dataclass(frozen=True)
class Check:
    """Counts for one property."""

    name: str
    description: str
    antecedents: int = 0
    counterexamples: int = 0
    ties_skipped: int = 0
    asserted: bool = True
    example: Optional[str] = None

    @property
    def passed(self):
        return self.counterexamples == 0

    def as_dict(self):
        return {
            "name": self.name,
            "description": self.description,
            "antecedents": self.antecedents,
            "counterexamples": self.counterexamples,
            "ties_skipped": self.ties_skipped,
            "asserted": self.asserted,
            "example": self.example,
        }


class CheckTally(object):
    """Mergeable per-check counters."""

    def __init__(self):
        super(CheckTally, self).__init__()
        self.counts = dict((name, [0, 0, 0]) for name in CHECKS)
        self.examples = {}
        self.accepted = 0
        self.rejected = 0

    def __add__(self, other):
        merged = CheckTally()
        for name in CHECKS:
            merged.counts[name] = [p + q for p, q in zip(self.counts[name], other.counts[name])]
        merged.examples = dict(other.examples)
        merged.examples.update(self.examples)
        merged.accepted = self.accepted + other.accepted
        merged.rejected = self.rejected + other.rejected
        return merged

    def record(self, name, holds, example=None):
        """Records one antecedent and whether the consequent held."""
        counts = self.counts[name]
        counts[0] += 1
        if not holds:
            counts[1] += 1
            if example is not None:
                self.examples.setdefault(name, example)

    def tie(self, name):
        self.counts[name][2] += 1

    def checks(self) -> Tuple[Check, ...]:
        results = []
        for name, (description, asserted) in CHECKS.items():
            antecedents, counterexamples, ties = self.counts[name]
            results.append(
                Check(
                    name=name,
                    description=description,
                    antecedents=antecedents,
                    counterexamples=counterexamples,
                    ties_skipped=ties,
                    asserted=asserted,
                    example=self.examples.get(name),
                )
            )
        return tuple(results)


@dataclass(frozen=True)
class VerifyReport:
    n: int
    seed: int
    accepted: int
    rejected: int
    checks: Tuple[Check, ...]

    @property
    def passed(self):
        """True when no asserted check has a counterexample."""
        return all(check.passed for check in self.checks if check.asserted)

    def get(self, name) -> Check:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def as_dict(self):
        return {
            "n": self.n,
            "seed": self.seed,
            "accepted": self.accepted,
            "rejected": self.rejected,
            "passed": self.passed,
            "checks": [check.as_dict() for check in self.checks],
        }


def bound_holds(margin: Margin, strict=False):
    """
    Compares r against the odds ratio bound on a margin with r > 0.

    :param margin: measure-complete Margin with positive association.
    :param strict: require r < bound except on the a=d, b=c equality case.
    :returns: True if the bound holds.
    """
    r = margin.correlation()
    bound = odds_ratio_factor(margin.odds_ratio())
    if not strict:
        return r <= bound * (1.0 + BOUND_TOLERANCE)
    if margin.a == margin.d and margin.b == margin.c:
        return math.isclose(r, bound, rel_tol=BOUND_TOLERANCE, abs_tol=BOUND_TOLERANCE)
    return r < bound


def check_table(tally: CheckTally, table):
    """Runs every sampled check on one canonicalized, accepted table."""
    eps = config.TIE_EPSILON
    ms = measures(table)
    profile = evaluate_conditions(ms)
    reversal = detect_reversals(table)
    text = table.to_text()

    strong = reversal.strong_simpson
    ard = reversal.ard_reversal

    if strong:
        tally.record("strong_implies_ard", ard, text)
        tally.record("strong_implies_ls", reversal.ls_reversal, text)
        tally.record("strong_implies_or", profile.odds_ratio, text)
    if ard:
        tally.record("ard_implies_stratum", reversal.any_stratum_reversed, text)
    if profile.pearson:
        tally.record("pearson_implies_or", profile.odds_ratio, text)

    pearson_cmp = profile.comparison("pearson")
    gap = pearson_cmp.lhs[0] - pearson_cmp.rhs[0]
    if abs(reversal.beta_x_given_w) <= eps or abs(gap) <= eps:
        tally.tie("ls_iff_pearson")
    else:
        tally.record("ls_iff_pearson", reversal.ls_reversal == profile.pearson, text)

    if abs(reversal.adjusted_rd) <= eps:
        tally.tie("ard_iff_adjusted_rr")
    else:
        tally.record("ard_iff_adjusted_rr", ard == (reversal.adjusted_rr < 1.0), text)

    oracle = ls_oracle(table)
    tally.record(
        "ls_agreement",
        abs(oracle.beta_x_given_w - reversal.beta_x_given_w) <= config.LS_TOLERANCE,
        text,
    )

    for first, second in (("x", "y"), ("x", "w"), ("w", "y")):
        margin = table.margin(first, second)
        if margin.cross_difference > 0:
            tally.record("bound_sampled", bound_holds(margin), text)

    if ms.rr_xy > 1.0 and ms.rr_xw > 1.0 and ard:
        tally.record("cornfield_necessity", profile.cornfield, text)


def check_chunk(task: simulation.ChunkTask) -> CheckTally:
    """Runs the sampled checks over one chunk of tables."""
    tally = CheckTally()
    stream = simulation.chunk_stream(task)
    for table in stream:
        check_table(tally, canonicalize_w(table))
    tally.accepted = stream.accepted
    tally.rejected = stream.rejected
    log.debug("verify chunk %d done: %r", task.chunk.index, stream)
    return tally


def check_grid(tally: CheckTally, high=GRID_MAX):
    """Checks the strict correlation bound on every margin with counts in 1..high."""
    for a, b, c, d in itertools.product(range(1, high + 1), repeat=4):
        margin = Margin(a, b, c, d)
        if margin.cross_difference > 0:
            tally.record("bound_grid", bound_holds(margin, strict=True), "%d,%d,%d,%d" % (a, b, c, d))


def check_zero_interaction(tally: CheckTally, size=4, weights=(1, 2, 3)):
    """
    Checks reversals on constructed tables with zero interaction and a
    positive aggregate X-Y association.
    """
    for y00, y01 in itertools.product(range(size + 1), repeat=2):
        for effect in range(-size, size + 1):
            if not (0 <= y00 + effect <= size and 0 <= y01 + effect <= size):
                continue
            for k in itertools.product(weights, repeat=4):
                table = zero_interaction_table(size, y00, y01, effect, weights=k)
                if table.margin("x", "y").cross_difference <= 0:
                    continue
                strong, weak = detect_simpson(table)
                ard = adjusted_risk_difference(table) < 0
                text = table.to_text()
                tally.record("zero_interaction_ard", ard == strong, text)
                tally.record("zero_interaction_weak", not weak, text)


def run_verify(n=None, seed=None, workers=None) -> VerifyReport:
    """
    Runs the property suite.

    :param n: sampled tables (default config.N).
    :param seed: sampler seed (default config.SEED).
    :param workers: worker processes (default $SIMPSON_THREADS).
    :returns: VerifyReport instance.
    """
    n = int(config.N if n is None else n)
    seed = int(config.SEED if seed is None else seed)
    cfg = SamplerConfig(seed=seed, filter=TableFilter.OR_XY_GT_1, target_accepted=n)
    tasks = simulation.plan_tasks("unconditional", cfg)
    log_settings("verify", n=n, seed=seed, chunks=len(tasks))

    with threads.ProgressMonitor("verify", len(tasks)) as monitor:
        results = worker.run_chunks(check_chunk, tasks, workers=workers, monitor=monitor)

    tally = CheckTally()
    for result in results:
        tally = tally + result

    if tally.rejected > cfg.rejection_budget:
        raise sampling.RejectionBudgetExceeded(
            "rejection budget of %d exceeded" % cfg.rejection_budget,
            accepted=tally.accepted,
            rejected=tally.rejected,
        )

    check_grid(tally)
    check_zero_interaction(tally)

    report = VerifyReport(
        n=n,
        seed=seed,
        accepted=tally.accepted,
        rejected=tally.rejected,
        checks=tally.checks(),
    )
    for check in report.checks:
        if check.asserted and not check.passed:
            log.error("%s: %d counterexamples", check.description, check.counterexamples)
    return report
