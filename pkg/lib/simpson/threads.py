#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains threading classes and functions.
"""

import time
import threading

from simpson import config
from simpson import sample
from simpson import util
from simpson.logger import log


class StoppableThread(threading.Thread):
    """Thread class with a stop() method."""

    def __init__(self, *args, **kwargs):
        super(StoppableThread, self).__init__(*args, **kwargs)
        self._stop_event = threading.Event()
        self.daemon = True

    def stop(self):
        """Stop the thread."""
        self._stop_event.set()

    def stopped(self):
        """Returns True if thread is stopped."""
        return self._stop_event.is_set()


class ProgressMonitor(StoppableThread):
    """Logs chunk progress and resource usage while a run is going."""

    def __init__(self, label, total, wait_time=config.MONITOR_INTERVAL):
        """
        :param label: run label used in log lines.
        :param total: number of work chunks in the run.
        :param wait_time: interval in seconds between log lines.
        """
        super(ProgressMonitor, self).__init__()
        self.name = "%s monitor" % label
        self.label = label
        self.total = total
        self.done = 0
        self.wait_time = wait_time
        self.start_time = util.get_time()
        self._lock = threading.Lock()

    def __enter__(self):
        host = sample.host_info()
        log.debug(
            "%s: host:%s platform:%s python:%s cpus:%s",
            self.label,
            host["hostname"],
            host["platform"],
            host["python"],
            host["cpu_count"],
        )
        self.start()
        return self

    def __exit__(self, *exc):
        self.stop()
        self.report()

    def update(self, done=1):
        """Records finished chunks."""
        with self._lock:
            self.done += done

    def elapsed_time(self):
        """Returns elapsed time in seconds."""
        return (util.get_time() - self.start_time) / 1000.0

    def report(self):
        """Logs one progress line."""
        samp = sample.Sample().data()
        runtime = int(self.elapsed_time())
        kwargs = {
            "label": self.label,
            "done": self.done,
            "total": self.total,
            "cpu": samp["process"]["cpu_percent"],
            "rss": util.b2h(samp["process"]["memory"]["rss"]),
            "workers": samp["process"]["workers"],
            "runtime": time.strftime("%H:%M:%S", time.gmtime(runtime)),
        }
        msg = "{label}: chunks:{done}/{total} cpu:{cpu}% rss:{rss} workers:{workers} runtime:{runtime}"
        log.debug(msg.format(**kwargs))

    def run(self):
        """Called when thread starts."""
        while not self._stop_event.wait(self.wait_time):
            self.report()
