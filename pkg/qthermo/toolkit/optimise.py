#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 18-07-2020 17:01:37

    Optimisers over a "model" that exposes the quantities an optimiser needs.
"""

__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

import logging

from collections import defaultdict, namedtuple

import numpy as np

from ..errors import DomainError

logger = logging.getLogger(__name__)

NewtonResult = namedtuple('NewtonResult', 'x residual iterations converged')

class Optimiser:

    def __init__(self, model):
        self.model = model
        self.record = defaultdict(list) # values of interest per iteration

    def step(self, *args):
        raise NotImplementedError()

    def __call__(self, *args, **kwargs):
        raise NotImplementedError()

    def __str__(self):
        return 'model:' + type(self.model).__name__ + '\noptimiser:' + type(self).__name__

    def __repr__(self):
        return str(self)

class NewtonOptimiser(Optimiser):
    """ Damped Newton iteration for a square system F(x) = 0.

    The model must provide residual(x) -> ndarray and jacobian(x) -> ndarray.
    residual may raise a DomainError, the step is then halved as for a rejected step.

    Args:
        model (object): the system.
        tol (float, optional): stop when max|F(x)| <= tol. Defaults to 1e-12.
        max_iter (int, optional): iteration cap. Defaults to 100.
        min_damping (float, optional): smallest step fraction tried. Defaults to 1e-10.
    """

    def __init__(self, model, tol=1e-12, max_iter=100, min_damping=1e-10):
        super(NewtonOptimiser, self).__init__(model)
        self.tol = tol
        self.max_iter = max_iter
        self.min_damping = min_damping

    def step(self, x, r):
        """ One damped Newton step from x with residual r = F(x).

        Returns:
            tuple: (x, r) after the step, or None if no step fraction reduced the residual.
        """
        try:
            dx = np.linalg.solve(self.model.jacobian(x), -r)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(dx)):
            return None
        merit = np.linalg.norm(r)
        t = 1.
        while t >= self.min_damping:
            x_new = x + t * dx
            try:
                r_new = self.model.residual(x_new)
            except DomainError:
                t /= 2.
                continue
            if np.all(np.isfinite(r_new)) and (np.linalg.norm(r_new) <= (1. - 1e-4 * t) * merit or np.max(np.abs(r_new)) <= self.tol):
                self.record['damping'].append(t)
                return x_new, r_new
            t /= 2.
        return None

    def __call__(self, x0):
        """ Iterate from x0.

        Returns:
            NewtonResult: x, max|F(x)|, iterations, converged. A non-converged result carries the best point seen.
        """
        x = np.asarray(x0, dtype=float).copy()
        try:
            r = self.model.residual(x)
        except DomainError:
            return NewtonResult(x, float('inf'), 0, False)
        for i in range(self.max_iter):
            norm = float(np.max(np.abs(r)))
            self.record['residual'].append(norm)
            if norm <= self.tol:
                return NewtonResult(x, norm, i, True)
            result = self.step(x, r)
            if result is None:
                logger.debug("newton stalled at residual %.3e after %d iterations", norm, i)
                return NewtonResult(x, norm, i, False)
            x, r = result
        norm = float(np.max(np.abs(r)))
        return NewtonResult(x, norm, self.max_iter, norm <= self.tol)
