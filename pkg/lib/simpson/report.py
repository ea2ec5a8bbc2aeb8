#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains report renderers for text, csv and json output.

Text output rounds to 4 decimal places; csv and json carry full precision.
"""

import io
import json

import pandas

from simpson import util
from simpson.conditions import CONDITIONS, LABELS
from simpson.simulation import (
    FAMILIES,
    GIVEN_CONDITION,
    REVERSAL_LABELS,
    REVERSALS,
)

FORMATS = ("text", "csv", "json")

COLUMNS = ["condition", "reversal", "family", "p_hat", "se", "n"]

CAPTIONS = {
    GIVEN_CONDITION: "P(reversal | condition)",
    "not_given_not_condition": "P(not reversal | not condition)",
}


def to_frame(report):
    """
    Returns a DataFrame with one row per (family, condition, reversal).

    :param report: SimulationReport instance.
    :returns: pandas.DataFrame.
    """
    rows = [estimate.as_dict() for estimate in report.estimates]
    frame = pandas.DataFrame(rows, columns=COLUMNS)
    frame["p_hat"] = frame["p_hat"].astype(float)
    frame["se"] = frame["se"].astype(float)
    frame["n"] = frame["n"].astype(int)
    return frame


def to_csv(report):
    """Returns the report as csv text with full precision floats."""
    buffer = io.StringIO()
    to_frame(report).to_csv(buffer, index=False, lineterminator="\n", na_rep="")
    return buffer.getvalue()


def report_dict(report):
    data = report.metadata()
    data["sampler"] = report.sampler.as_dict()
    data["estimates"] = [estimate.as_dict() for estimate in report.estimates]
    return data


def to_json(report):
    """Returns the report as a json document."""
    return json.dumps(report_dict(report), indent=2) + "\n"


def _caption(report, family):
    caption = CAPTIONS[family] + ", assuming OR_XY > 1"
    if report.kind == "conditional":
        caption += ", OR_WY > 1, and conditional on %s" % report.source.to_text()
    return caption


def to_text(report):
    """Returns two aligned tables of 'p +- se' cells, one per family."""
    blocks = []
    for family in FAMILIES:
        cells = {}
        for condition in CONDITIONS:
            row = {}
            for reversal in REVERSALS:
                estimate = report.get(condition, reversal, family)
                if estimate.p_hat is None:
                    row[REVERSAL_LABELS[reversal]] = "undefined"
                else:
                    row[REVERSAL_LABELS[reversal]] = "%s ± %s" % (
                        util.fmt(estimate.p_hat),
                        util.fmt(estimate.se),
                    )
            cells[LABELS[condition]] = row
        frame = pandas.DataFrame.from_dict(cells, orient="index")
        blocks.append(_caption(report, family))
        blocks.append(frame.to_string())
        blocks.append("")

    meta = report.metadata()
    overlap = meta["ard_ls_overlap"]
    blocks.append(
        "seed: %d  filter: %s  accepted: %d  rejected: %d  acceptance rate: %s"
        % (
            meta["seed"],
            meta["filter"],
            meta["accepted"],
            meta["rejected"],
            util.fmt(meta["acceptance_rate"]),
        )
    )
    blocks.append(
        "ARD/least-squares reversal overlap: both %d  ARD only %d  LS only %d  neither %d"
        % (overlap["both"], overlap["ard_only"], overlap["ls_only"], overlap["neither"])
    )
    return "\n".join(blocks) + "\n"


def render(report, format="text"):
    """Renders a SimulationReport in one of FORMATS."""
    return {"text": to_text, "csv": to_csv, "json": to_json}[format](report)


def render_case(case, format="text"):
    """Renders a CaseReport; an embedded simulation follows in the same format."""
    if format == "json":
        data = case.as_dict()
        if case.simulation is not None:
            data["simulation"] = report_dict(case.simulation)
        return json.dumps(data, indent=2) + "\n"

    t = case.threshold
    if format == "csv":
        frame = pandas.DataFrame(
            [
                ("r_xy", case.r_xy),
                ("or_xy", case.or_xy),
                ("rr_xy", case.rr_xy),
                ("rd_xy", case.rd_xy),
                ("or_wy_bound", t.or_wy_bound),
                ("required_or_wx", t.required_or_wx),
            ],
            columns=["measure", "value"],
        )
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, lineterminator="\n", na_rep="")
        text = buffer.getvalue()
        if case.simulation is not None:
            text += "\n" + to_csv(case.simulation)
        return text

    lines = [
        "collapsed table (a,b,c,d): %s" % case.collapsed.to_text(),
        "r_XY   %s" % util.fmt(case.r_xy),
        "OR_XY  %s" % util.fmt(case.or_xy),
        "RR_XY  %s" % util.fmt(case.rr_xy),
        "RD_XY  %s" % util.fmt(case.rd_xy),
        "OR_WY bound  %s" % util.fmt(t.or_wy_bound),
    ]
    if t.attainable:
        lines.append(
            "required OR_WX ≈ %.2f (%s)" % (t.required_or_wx, util.fmt(t.required_or_wx))
        )
    else:
        lines.append("required OR_WX: unattainable (q = %s)" % util.fmt(t.q))
    lines.append("")
    lines.extend(case.interpretation())
    text = "\n".join(lines) + "\n"
    if case.simulation is not None:
        text += "\n" + to_text(case.simulation)
    return text


def evaluation_dict(evaluation):
    table, ms, profile, reversal, closed, oracle = evaluation
    return {
        "table": table.to_text(),
        "measures": ms.as_dict(),
        "conditions": profile.as_dict(),
        "reversals": reversal.as_dict(),
        "least_squares": {
            "closed_form": dict(zip(("beta_x_given_w", "beta_w_given_x", "beta_0"), closed.as_tuple())),
            "normal_equations": dict(zip(("beta_x_given_w", "beta_w_given_x", "beta_0"), oracle.as_tuple())),
        },
    }


def render_evaluation(evaluation, format="text"):
    """
    Renders a single-table evaluation tuple
    (table, measures, conditions, reversals, closed form fit, oracle fit).
    """
    data = evaluation_dict(evaluation)
    if format == "json":
        return json.dumps(data, indent=2) + "\n"

    rows = [("table", "", data["table"])]
    for name, value in data["measures"].items():
        if name == "p_y_given_xw":
            for x in (0, 1):
                for w in (0, 1):
                    rows.append(("measures", "P(Y=1|X=%d,W=%d)" % (x, w), value[x][w]))
        else:
            rows.append(("measures", name, value))
    for name in CONDITIONS:
        rows.append(("conditions", name, data["conditions"][name]["present"]))
    for name, value in data["reversals"].items():
        rows.append(("reversals", name, value))
    for method, fit in data["least_squares"].items():
        for name, value in fit.items():
            rows.append(("least_squares", "%s %s" % (method, name), value))

    frame = pandas.DataFrame(rows, columns=["section", "name", "value"])
    if format == "csv":
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()

    def text_value(value):
        if isinstance(value, bool) or isinstance(value, str):
            return str(value)
        return util.fmt(value)

    frame["value"] = frame["value"].map(text_value)
    return frame.to_string(index=False) + "\n"


def render_verify(report, format="text"):
    """Renders a VerifyReport."""
    if format == "json":
        return json.dumps(report.as_dict(), indent=2) + "\n"

    frame = pandas.DataFrame([check.as_dict() for check in report.checks])
    if format == "csv":
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, lineterminator="\n", na_rep="")
        return buffer.getvalue()

    frame["status"] = [
        ("ok" if check.passed else "FAILED") if check.asserted else "info"
        for check in report.checks
    ]
    columns = ["description", "antecedents", "counterexamples", "ties_skipped", "status"]
    lines = [
        "seed: %d  tables: %d  rejected: %d" % (report.seed, report.accepted, report.rejected),
        "",
        frame[columns].to_string(index=False),
        "",
    ]
    asserted = [check for check in report.checks if check.asserted]
    failures = sum(check.counterexamples for check in asserted)
    lines.append("%d counterexamples across %d checked properties" % (failures, len(asserted)))
    for check in asserted:
        if check.example:
            lines.append("first counterexample for %s: %s" % (check.name, check.example))
    return "\n".join(lines) + "\n"
