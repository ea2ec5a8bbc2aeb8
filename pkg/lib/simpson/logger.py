#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains the package logger and its stderr handler.

Reports go to stdout, so log lines always go to stderr.
"""

import sys
import logging

from simpson import config
from simpson.version import __prog__

log = logging.Logger(__prog__)
log.setLevel(logging.DEBUG if config.DEBUG else logging.INFO)
log.addHandler(logging.NullHandler())


class CustomFormatter(logging.Formatter):
    """Formatter that colors the level name on terminals."""

    reset = "\x1b[0m"
    colors = {
        logging.DEBUG: "\x1b[34m",
        logging.INFO: "\x1b[32m",
        logging.WARNING: "\x1b[33m",
        logging.ERROR: "\x1b[31m",
        logging.CRITICAL: "\x1b[1;31m",
    }
    fmt = "[%(asctime)s] %(name)s %(processName)s %(levelname)s: %(message)s"
    datefmt = "%y-%m-%d %H:%M:%S"

    def __init__(self, color=False):
        super(CustomFormatter, self).__init__(self.fmt, datefmt=self.datefmt)
        self.color = color and sys.platform != "win32"

    def format(self, record):
        text = super(CustomFormatter, self).format(record)
        if not self.color:
            return text
        level = record.levelname
        colored = "%s%s%s" % (self.colors.get(record.levelno, ""), level, self.reset)
        return text.replace(" %s:" % level, " %s:" % colored, 1)


def setup_stream_handler(name=__prog__, level=None, stream=None):
    """Adds a new stderr stream handler, replacing any previous one.

    :param name: handler name.
    :param level: optional logger level override.
    :param stream: optional stream (default sys.stderr).
    :returns: the new handler.
    """
    stream = stream or sys.stderr
    for h in list(log.handlers):
        if h.name == name and isinstance(h, logging.StreamHandler):
            log.removeHandler(h)

    isatty = getattr(stream, "isatty", None)
    handler = logging.StreamHandler(stream)
    handler.set_name(name)
    handler.setFormatter(CustomFormatter(color=bool(isatty and isatty())))
    log.addHandler(handler)

    if level is not None:
        log.setLevel(level)

    return handler


def log_settings(label, **settings):
    """Logs the settings a run starts with as key=value pairs."""
    pairs = " ".join("%s=%s" % (k, settings[k]) for k in sorted(settings))
    log.info("%s: %s", label, pairs)
