#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Contains work chunk planning and the worker pool that runs chunks.

A run of N accepted tables is cut into chunks whose boundaries depend only
on N and config.CHUNK_SIZE. Each chunk owns its own random substream, so a
run produces the same tallies with one worker or many.
"""

import math
import os
import signal
import threading
import concurrent.futures
from dataclasses import dataclass
from typing import Callable, List, Sequence

from simpson import config
from simpson.config import ConfigError
from simpson.logger import log


@dataclass(frozen=True)
class ChunkSpec:
    """One deterministic unit of simulation work."""

    index: int
    target: int
    max_rejections: int


def plan_chunks(target, max_rejections, chunk_size=None) -> List[ChunkSpec]:
    """
    Splits a run into chunks of at most `chunk_size` accepted tables and
    shares the rejection budget between them in proportion.

    :param target: total accepted tables.
    :param max_rejections: total rejection budget.
    :param chunk_size: accepted tables per chunk (default config.CHUNK_SIZE).
    :returns: list of ChunkSpec.
    """
    chunk_size = int(chunk_size or config.CHUNK_SIZE)
    if chunk_size < 1:
        raise ConfigError("invalid chunk size: %s" % chunk_size)

    chunks = []
    for index, start in enumerate(range(0, target, chunk_size)):
        size = min(chunk_size, target - start)
        share = math.ceil(max_rejections * size / target)
        chunks.append(ChunkSpec(index=index, target=size, max_rejections=share))
    return chunks


def get_worker_count(value=None):
    """
    Returns the number of worker processes to use.

    :param value: explicit count, else $SIMPSON_THREADS / config.THREADS.
    :returns: positive int.
    """
    if value is None:
        value = os.getenv("SIMPSON_THREADS", config.THREADS)
    try:
        count = int(value)
    except (TypeError, ValueError):
        raise ConfigError("invalid worker count: %r" % value)
    if count < 1:
        raise ConfigError("invalid worker count: %r" % value)
    return count


def run_chunks(func: Callable, tasks: Sequence, workers=1, monitor=None) -> list:
    """
    Runs func(task) for every task and returns results in task order.
    Tasks run inline with one worker, else on a process pool.

    :param func: picklable module-level function.
    :param tasks: sequence of picklable task objects.
    :param workers: number of worker processes.
    :param monitor: optional threads.ProgressMonitor to update.
    :returns: list of results, one per task.
    """
    workers = min(get_worker_count(workers), max(len(tasks), 1))

    if workers == 1:
        results = []
        for task in tasks:
            results.append(func(task))
            if monitor:
                monitor.update()
        return results

    log.debug("starting %d workers for %d chunks", workers, len(tasks))
    results = [None] * len(tasks)
    executor = concurrent.futures.ProcessPoolExecutor(max_workers=workers)
    previous = signal.getsignal(signal.SIGINT)

    def signal_handler(signum, frame):
        log.warning("interrupted, cancelling pending chunks")
        executor.shutdown(wait=False, cancel_futures=True)
        raise KeyboardInterrupt

    handle_signals = threading.current_thread() is threading.main_thread()
    if handle_signals:
        signal.signal(signal.SIGINT, signal_handler)
    try:
        futures = dict(
            (executor.submit(func, task), i) for i, task in enumerate(tasks)
        )
        for future in concurrent.futures.as_completed(futures):
            results[futures[future]] = future.result()
            if monitor:
                monitor.update()
    except BaseException:
        executor.shutdown(wait=False, cancel_futures=True)
        raise
    else:
        executor.shutdown(wait=True)
    finally:
        if handle_signals:
            signal.signal(signal.SIGINT, previous)

    return results
