#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

import pytest

from simpson.tables import CollapsedTable, ContingencyTable

# classical kidney stone counts in (x, w, y) order
KIDNEY = (71, 192, 6, 81, 25, 55, 36, 234)

# Zika case-control counts in a, b, c, d order
ZIKA = "501,91,16533,1784"


@pytest.fixture
def kidney():
    return ContingencyTable(KIDNEY)


@pytest.fixture
def zika():
    return CollapsedTable.from_text(ZIKA)


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    """Runs chunks inline unless a test asks for a pool."""
    monkeypatch.setenv("SIMPSON_THREADS", "1")
