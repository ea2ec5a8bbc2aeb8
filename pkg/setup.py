#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

import codecs
import os
import sys

from setuptools import find_packages, setup

if sys.version_info < (3, 9):
    raise RuntimeError("simpson requires Python 3.9+")

here = os.path.abspath(os.path.dirname(__file__))


def read(*parts):
    return codecs.open(os.path.join(here, *parts), "r", encoding="utf-8").read()


exec(read("lib", "simpson", "version.py"))


setup(
    name="simpson",
    description="Sensitivity analysis of Simpson's paradox on 2x2x2 tables",
    long_description=read("README.md"),
    long_description_content_type="text/markdown",
    author="Simpson Developers",
    version=__version__,
    license="BSD 3-Clause License",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
    package_dir={"": "lib"},
    packages=find_packages("lib"),
    entry_points={
        "console_scripts": [
            "simpson = simpson.cli:main",
        ],
    },
    install_requires=[
        "numpy>=1.22",
        "pandas>=1.5",
        "psutil>=5.9.3",
        "PyYAML>=5.3.1",
    ],
    extras_require={
        "test": [
            "pytest>=7.0",
            "scipy>=1.8",
        ],
    },
    python_requires=">=3.9",
    zip_safe=False,
)
