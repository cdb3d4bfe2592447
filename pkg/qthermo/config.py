#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 02-10-2026 09:31:52

    Run-time configuration read from the environment.

    QTHERMO_THREADS caps the number of worker threads used inside a single
    operation (multistart solves, restarts, sweeps). Results never depend on it.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

import os
import logging

from concurrent.futures import ThreadPoolExecutor

from .errors import ParseError

logger = logging.getLogger(__name__)

THREADS_ENV = "QTHERMO_THREADS"

def threads():
    """ Number of worker threads allowed by the environment (default 1). """
    value = os.environ.get(THREADS_ENV, "1").strip()
    try:
        n = int(value)
    except ValueError:
        raise ParseError("expected a positive integer, got '{0}'".format(value), field=THREADS_ENV)
    if n < 1:
        raise ParseError("expected a positive integer, got '{0}'".format(value), field=THREADS_ENV)
    return n

def parallel_map(fn, items, max_workers=None):
    """ Map fn over items, possibly concurrently. The result order is the order of items.

    Args:
        fn (callable): function of one argument.
        items (iterable): arguments.
        max_workers (int, optional): overrides QTHERMO_THREADS.

    Returns:
        list: [fn(x) for x in items]
    """
    items = list(items)
    n = threads() if max_workers is None else max_workers
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    logger.debug("mapping %d items over %d threads", len(items), n)
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
