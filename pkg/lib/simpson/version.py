#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#
# Follows PEP-0440 version scheme guidelines
# https://www.python.org/dev/peps/pep-0440/#version-scheme
#

__prog__ = "simpson"
__version__ = "0.3.1"
