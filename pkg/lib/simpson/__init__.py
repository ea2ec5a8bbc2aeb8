#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

from simpson.tables import CollapsedTable, ContingencyTable, collapse, measures
from simpson.conditions import (
    canonicalize_w,
    canonicalize_x,
    evaluate_conditions,
    required_or_wx,
)
from simpson.reversals import detect_reversals, detect_simpson, ls_coefficients, ls_oracle
from simpson.sampling import SamplerConfig, TableFilter
from simpson.simulation import analyze_case, run_conditional, run_unconditional
