#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on 02-10-2026 10:02:44

Single pass statistics, used for Monte Carlo averages and restart bookkeeping.
"""
import math

class MeanAccumulator:

    def __init__(self):
        self.reset()

    def push(self, x):
        self._n += 1
        self._m = MeanAccumulator._moving_mean(self._m, float(x), self._n)

    def extend(self, xs):
        for x in xs:
            self.push(x)

    def mean(self):
        assert self._n > 0 # mean of no samples is undefined
        return self._m

    def __len__(self):
        return self._n

    def _moving_mean(mean, x, n):
        '''
            Args:
                mean: current mean
                x: next value
                n: number of values so far (including x)
        '''
        return mean + (x - mean) / n

    def reset(self):
        self._m = 0.
        self._n = 0

    def __repr__(self):
        return MeanAccumulator.__name__ + '-' + str(self._m)

class VarianceAccumulator(MeanAccumulator):
    """ Welford's update of mean and sum of squared deviations. Also tracks min and max. """

    def push(self, x):
        x = float(x)
        self._n += 1
        self._m, self._s = VarianceAccumulator._moving_variance(self._m, self._s, x, self._n)
        self._min = min(self._min, x)
        self._max = max(self._max, x)

    def variance(self):
        assert self._n > 1 # variance of a single sample is undefined
        return self._s / self._n

    def sample_variance(self):
        assert self._n > 1
        return self._s / (self._n - 1)

    def standard_error(self):
        return math.sqrt(self.sample_variance() / self._n)

    def min(self):
        assert self._n > 0
        return self._min

    def max(self):
        assert self._n > 0
        return self._max

    def _moving_variance(M, S, x, n):
        Mn = M + (x - M) / n
        S = S + (x - M) * (x - Mn)
        return Mn, S

    def reset(self):
        super(VarianceAccumulator, self).reset()
        self._s = 0.
        self._min = float('inf')
        self._max = -float('inf')

    def summary(self):
        """ dict of count, mean, min, max (and std when defined). """
        result = dict(count=self._n)
        if self._n > 0:
            result.update(mean=self._m, min=self._min, max=self._max)
        if self._n > 1:
            result['std'] = math.sqrt(self.sample_variance())
        return result

    def __repr__(self):
        return VarianceAccumulator.__name__ + '-' + str(self.summary())
