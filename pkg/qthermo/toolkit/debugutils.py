#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on 02-10-2026 09:58:10

Precondition checks and wall-clock timing.
"""
import time
import logging

logger = logging.getLogger(__name__)

class __assertion:

    def __call__(self, condition, error):
        """ Raise error if condition holds.

        Args:
            condition (bool): the failure condition.
            error (str, Exception): raised as is, a str is wrapped in a ValueError.
        """
        if condition:
            if isinstance(error, str):
                raise ValueError(error)
            raise error

assertion = __assertion()

class Time:
    """ Context manager measuring wall-clock time. The elapsed time (seconds) is logged at DEBUG.

    Example:
        with Time("solve") as t:
            ...
        t.elapsed
    """

    t = lambda: time.perf_counter()

    def __init__(self, message=''):
        self.message = message
        self.start = None
        self.elapsed = None

    def __enter__(self):
        self.start = Time.t()
        return self

    def __exit__(self, type, value, traceback):
        self.elapsed = Time.t() - self.start
        logger.debug("%s %.6fs", self.message, self.elapsed)
