#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains process resource sample classes and functions.
"""

import os
import sys
import socket

import psutil

from simpson import util

# cache some information about the running process
hostname = socket.gethostname()
platform = sys.platform
process_id = os.getpid()
process = psutil.Process(process_id)
py_version = util.get_python_version()


def host_info():
    """Returns host info dict, logged once when a run starts."""
    return {
        "hostname": hostname,
        "platform": platform,
        "python": py_version,
        "cpu_count": psutil.cpu_count(),
    }


class Sample(object):
    """Resource usage sample of this process and its worker children."""

    def __init__(self, interval=0, data=None):
        """
        :param interval: how long in seconds to sample cpu data (blocking)
        :param data: extra data to store on sample
        """
        super(Sample, self).__init__()
        self._data = {"process": self.get_process_info(interval)}
        self._data.update(data or {})

    def data(self):
        """Returns sample data dict."""
        return self._data

    def get_process_info(self, interval=0):
        """Samples and returns process info dict, children included."""
        rss, vms = 0, 0
        members = [process]
        try:
            members += process.children(recursive=True)
        except psutil.Error:
            pass
        for member in members:
            try:
                memory = member.memory_info()
            except psutil.Error:
                continue
            rss += memory.rss
            vms += memory.vms
        return {
            "cpu_percent": process.cpu_percent(interval=interval),
            "memory": {
                "rss": rss,
                "vms": vms,
            },
            "pid": process.pid,
            "workers": len(members) - 1,
        }
