#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 08-10-2026 10:41:06

    The asymptotic q-pressure, the growth rate of

        L_n(1)(x) = sum_{sigma^n y = x} e_q^{S_n A(y)} = sum_{sigma^n y = x} e^{phi_n(y)},

    with phi_n = log e_q^{S_n A}. L_n(1) is evaluated exactly by grouping the d^n preimages
    of x by their Birkhoff sum (SumBuckets), so the cost grows with the number of distinct
    sums rather than with d^n.

    Also here: pointwise phi_n, the sub-additivity checks, Monte Carlo averages of phi_n / n
    and the variational side of the limit over Markov measures.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

import math
import logging

from collections import namedtuple
from fractions import Fraction

import numpy as np

from numpy.lib.stride_tricks import sliding_window_view

from . import variational
from .qfun import as_qparam
from .shift import Word, word_index, all_words, birkhoff_sum
from .ruelle import split_table, pre_index, state_memory, ks_entropy
from .staticq import as_prob_vector
from .errors import DomainError, QExpDomain
from .toolkit.debugutils import assertion
from .toolkit.accumulate import VarianceAccumulator

logger = logging.getLogger(__name__)

QUANTUM = 1e-9
MAX_MEMORY = 2
MAX_ALPHABET = 3
MAX_N = 5000
MAX_BUCKETS = 2000000
MAX_SPAN = 64
LATTICE_TOL = 1e-9
MAX_ENUMERATION = 2 ** 22
MIN_FIT_N = 8

AsymptoticPressure = namedtuple('AsymptoticPressure', 'estimate fit sequence violation_fraction')
SubadditivityCheck = namedtuple('SubadditivityCheck', 'min_slack m n')
KingmanAverage = namedtuple('KingmanAverage', 'mean standard_error summary')
SubaddScan = namedtuple('SubaddScan', 'value argmax excluded_fraction')

def _log_exp_q(s, q):
    """ log e_q^s elementwise, finite for large s where e_q^s itself overflows. """
    s = np.asarray(s, dtype=float)
    scalar = np.ndim(s) == 0
    if q.classical:
        return float(s) if scalar else s
    k = 1. - q.q
    base = 1. + k * s
    bad = ~(base > 0.)
    if np.any(bad):
        where = tuple(int(i) for i in np.argwhere(bad)[0]) if not scalar else ()
        raise QExpDomain("phi_n undefined: 1 + (1 - q)S = {0:.6g} (q={1})".format(float(base[where]) if where else float(base), q.q), location=where)
    value = np.log1p(k * s) / k
    return float(value) if scalar else value

def phi_n(A, q, w, tail=None):
    """ phi_n(x) = log(1 + (1-q) S_n A(x)) / (1-q) for x = w.tail, n = len(w).

    Raises:
        QExpDomain: if 1 + (1-q) S_n A(x) <= 0.
    """
    q = as_qparam(q)
    return _log_exp_q(birkhoff_sum(A, w, tail), q)

def phi_n_gap(A, q, w, tail=None):
    """ psi_n(x) - phi_n(x), where psi_n is phi_n of A + c with c = max(-2 min A, 0).

    psi_n is sub-additive and the gap lies in [0, log 4 / (1-q)] once n is large.
    """
    c = max(-2. * float(A.values.min()), 0.)
    return phi_n(A + c, q, w, tail) - phi_n(A, q, w, tail)

# ---------------------------------------------------------------- buckets

def _lattice(values, max_span=MAX_SPAN, tol=LATTICE_TOL):
    """ (a0, delta, steps) with values = a0 + steps delta for integers 0 <= steps <= max_span, or None. """
    a0 = float(values.min())
    offsets = values - a0
    scale = max(1., float(np.max(np.abs(values))))
    positive = offsets[offsets > tol * scale]
    if positive.size == 0:
        return a0, 1., np.zeros(values.shape, dtype=int)
    unit = float(positive.min())
    ratios = offsets / unit
    denominator = 1
    for r in ratios.ravel():
        f = Fraction(float(r)).limit_denominator(max_span)
        if abs(float(f) - r) > tol * max(1., r):
            return None
        denominator = denominator * f.denominator // math.gcd(denominator, f.denominator)
    steps = np.rint(ratios * denominator).astype(int)
    if steps.max() > max_span:
        return None
    return a0, unit / denominator, steps

class SumBuckets:
    """ Multiplicities of the Birkhoff sums S_n A(w x) over the d^n words w, grouped by the state
    (first k symbols) of w x.

    Counts are exact integers. When the table values lie on a lattice a0 + delta Z the sums are
    stored densely, counts[state, j] being the number of words with S_n = n a0 + j delta.
    Otherwise sums are merged under the key round(S / quantum).

    Args:
        A (Potential): the potential, memory <= 2 and d <= 3.
        x0_prefix (Word, optional): the first k = max(m - 1, 1) symbols of the base point x.
            Defaults to 1...1.
        quantum (float, optional): key resolution of the sparse backend. Defaults to 1e-9.
        backend (str, optional): "dense", "sparse" or None to choose. Defaults to None.
    """

    def __init__(self, A, x0_prefix=None, quantum=QUANTUM, backend=None):
        assertion(A.memory > MAX_MEMORY or A.d > MAX_ALPHABET, DomainError("bucketed evaluation supports memory <= {0} and d <= {1}, got memory {2}, d {3}".format(MAX_MEMORY, MAX_ALPHABET, A.memory, A.d)))
        assertion(backend not in (None, "dense", "sparse"), DomainError("unknown backend '{0}'".format(backend)))
        k, A2 = split_table(A)
        d = A.d
        x0 = Word((1,) * k, d) if x0_prefix is None else Word(x0_prefix, d)
        assertion(len(x0) < k, DomainError("the base point needs at least {0} symbols, got {1}".format(k, len(x0))))
        self.A, self.d, self.k = A, d, k
        self.x0 = x0
        self.quantum = quantum
        self.n = 0
        self.pre = pre_index(d, k)
        self.A2 = A2
        start = word_index(x0[:k], d)
        lattice = None if backend == "sparse" else _lattice(A2)
        assertion(backend == "dense" and lattice is None, DomainError("table values are not commensurate"))
        if lattice is not None:
            self.backend = "dense"
            self.a0, self.delta, self.steps = lattice
            self.counts = np.zeros((d ** k, 1), dtype=object)
            self.counts[start, 0] = 1
        else:
            self.backend = "sparse"
            self.buckets = [dict() for _ in range(d ** k)]
            self.buckets[start][0] = [0., 1]
        logger.debug("%s buckets for %r from x0 = %s", self.backend, A, x0)

    @property
    def states(self):
        return self.d ** self.k

    def advance(self, steps=1):
        """ Prepend `steps` more symbols. """
        assertion(self.n + steps > MAX_N, DomainError("n is capped at {0}".format(MAX_N)))
        for _ in range(steps):
            if self.backend == "dense":
                self._step_dense()
            else:
                self._step_sparse()
            self.n += 1
        return self

    def _step_dense(self):
        width = self.counts.shape[1]
        new = np.zeros((self.states, width + int(self.steps.max())), dtype=object)
        for a in range(self.d):
            for x in range(self.states):
                j = self.steps[a, x]
                new[self.pre[a, x], j:j + width] += self.counts[x]
        self.counts = new

    def _step_sparse(self):
        new = [dict() for _ in range(self.states)]
        for x, bucket in enumerate(self.buckets):
            entries = list(bucket.values())
            for a in range(self.d):
                target = new[self.pre[a, x]]
                v = float(self.A2[a, x])
                for s, c in entries:
                    t = s + v
                    key = round(t / self.quantum)
                    entry = target.get(key)
                    if entry is None:
                        target[key] = [t, c]
                    else:
                        entry[1] += c
        size = sum(len(b) for b in new)
        assertion(size > MAX_BUCKETS, DomainError("{0} buckets at n = {1} exceed the cap {2}".format(size, self.n + 1, MAX_BUCKETS)))
        self.buckets = new

    def __len__(self):
        """ Number of occupied buckets. """
        if self.backend == "dense":
            return int(np.count_nonzero(self.counts))
        return sum(len(b) for b in self.buckets)

    def items(self):
        """ (states, sums, counts) of the occupied buckets. counts is a list of ints. """
        if self.backend == "dense":
            states, j = np.nonzero(self.counts)
            sums = self.n * self.a0 + j * self.delta
            return states, sums, [self.counts[x, i] for x, i in zip(states, j)]
        states, sums, counts = [], [], []
        for x, bucket in enumerate(self.buckets):
            for s, c in bucket.values():
                states.append(x)
                sums.append(s)
                counts.append(c)
        return np.array(states, dtype=int), np.array(sums, dtype=float), counts

    def total_count(self):
        """ Number of words counted, d^n. """
        if self.backend == "dense":
            return int(sum(self.counts.ravel()))
        return sum(c for b in self.buckets for _, c in b.values())

    def _weights(self, q):
        q = as_qparam(q)
        states, sums, counts = self.items()
        logc = np.array([math.log(c) for c in counts])
        if q.classical:
            return logc + sums, np.ones(sums.shape, dtype=bool), states, sums, counts
        base = 1. + (1. - q.q) * sums
        ok = base > 0.
        logw = np.full(sums.shape, -np.inf)
        logw[ok] = logc[ok] + np.log1p((1. - q.q) * sums[ok]) / (1. - q.q)
        return logw, ok, states, sums, counts

    def log_total(self, q):
        """ log sum over buckets of count e_q^sum, i.e. log L_n(1)(x0).

        Raises:
            QExpDomain: if a bucket leaves the domain of e_q, location = (state, sum).
        """
        logw, ok, states, sums, _ = self._weights(q)
        if not np.all(ok):
            i = int(np.argmin(ok))
            raise QExpDomain("bucket S = {0:.6g} at state {1} is outside the domain of e_q (n = {2})".format(sums[i], states[i], self.n), location=(int(states[i]), float(sums[i])))
        return _logsumexp(logw)

    def truncated_log_total(self, q):
        """ (log of the sum over the buckets inside the domain of e_q, fraction of words outside it). """
        logw, ok, _, _, counts = self._weights(q)
        bad = sum(c for c, good in zip(counts, ok) if not good)
        fraction = bad / self.total_count()
        if not np.any(ok):
            return -math.inf, fraction
        return _logsumexp(logw[ok]), fraction

def _logsumexp(x):
    top = float(np.max(x))
    return top + math.log(float(np.sum(np.exp(x - top))))

# ---------------------------------------------------------------- L_n(1)

def log_frak_L_n(A, q, x0_prefix=None, n=1):
    """ log L_n(1)(x0) from the bucketed sums. """
    assertion(n < 0, DomainError("n must be >= 0"))
    return SumBuckets(A, x0_prefix).advance(n).log_total(q)

def frak_L_n(A, q, x0_prefix=None, n=1):
    """ L_n(1)(x0) = sum over the d^n preimages y of x0 of e_q^{S_n A(y)}.

    Args:
        A (Potential): the potential, memory <= 2, d <= 3.
        q (float, QParam): deformation parameter.
        x0_prefix (Word, optional): first max(m - 1, 1) symbols of x0.
        n (int): number of iterates, 0 <= n <= 5000.

    Raises:
        QExpDomain: a Birkhoff sum leaves the domain of e_q, the location names the bucket.
        DomainError: size guards, or the value overflows a float (see log_frak_L_n).
    """
    value = log_frak_L_n(A, q, x0_prefix, n)
    assertion(value > 709., DomainError("L_n(1) = exp({0:.6g}) overflows, use log_frak_L_n".format(value)))
    return math.exp(value)

def enumerate_frak_L_n(A, q, x0_prefix=None, n=1):
    """ L_n(1)(x0) by direct enumeration of the d^n preimages (d^n <= 2^22). """
    q = as_qparam(q)
    d, m = A.d, A.memory
    assertion(d ** n > MAX_ENUMERATION, DomainError("enumeration of {0}^{1} words is too large".format(d, n)))
    k = state_memory(A)
    x0 = Word((1,) * k, d) if x0_prefix is None else Word(x0_prefix, d)
    assertion(len(x0) < k, DomainError("the base point needs at least {0} symbols, got {1}".format(k, len(x0))))
    if n == 0:
        return 1.
    words = all_words(d, n) - 1
    tail = np.broadcast_to(np.asarray(x0[:m - 1], dtype=int) - 1, (words.shape[0], m - 1))
    S = _window_sums(A, np.hstack([words, tail]), n)
    return float(math.fsum(np.exp(_log_exp_q(S, q))))

def _window_values(A, x):
    """ A at every window of the 0-based symbol rows x, shape (rows, L - m + 1). """
    windows = sliding_window_view(x, A.memory, axis=1)
    return A.values[windows @ (A.d ** np.arange(A.memory - 1, -1, -1))]

def _window_sums(A, x, n):
    return _window_values(A, x)[:, :n].sum(axis=1)

def _record(n, n_max):
    stride = max(1, n_max // 100)
    return n <= 100 or n >= n_max // 2 or n % stride == 0

def asymptotic_pressure(A, q, x0_prefix=None, n_max=2000):
    """ Estimate lim (1/n) log L_n(1)(x0).

    A single bucketed run records y_n = (1/n) log L_n(1)(x0) (every n <= 100, every n in the tail
    [n_max/2, n_max] and a sparse selection between) and fits y_n = P + alpha log(n)/n + beta/n by
    least squares on the tail.

    For A with negative values the buckets outside the domain of e_q are dropped and the largest
    fraction of dropped words is reported; the estimate is then not claimed to be the limit.

    Returns:
        AsymptoticPressure: estimate P, fit (P, alpha, beta), sequence [(n, y_n)], violation_fraction.
    """
    q = as_qparam(q)
    assertion(not MIN_FIT_N <= n_max <= MAX_N, DomainError("n_max must be in [{0}, {1}]".format(MIN_FIT_N, MAX_N)))
    truncate = float(A.values.min()) < 0.
    if truncate:
        logger.warning("A takes negative values, buckets outside the domain of e_q are left out of L_n(1)")
    buckets = SumBuckets(A, x0_prefix)
    sequence = []
    worst = 0.
    for n in range(1, n_max + 1):
        buckets.advance()
        if not _record(n, n_max):
            continue
        if truncate:
            value, fraction = buckets.truncated_log_total(q)
            worst = max(worst, fraction)
            assertion(value == -math.inf, DomainError("every word leaves the domain of e_q at n = {0}".format(n)))
        else:
            value = buckets.log_total(q)
        sequence.append((n, value / n))
    tail = np.array([(n, y) for n, y in sequence if n >= n_max // 2])
    ns, ys = tail[:, 0], tail[:, 1]
    X = np.column_stack([np.ones_like(ns), np.log(ns) / ns, 1. / ns])
    fit = np.linalg.lstsq(X, ys, rcond=None)[0]
    logger.info("asymptotic q-pressure %.12g (fit alpha %.6g, beta %.6g, n_max %d)", fit[0], fit[1], fit[2], n_max)
    return AsymptoticPressure(float(fit[0]), tuple(float(f) for f in fit), sequence, worst)

def tail_oscillation(sequence, fraction=0.1):
    """ max - min of y_n over n >= (1 - fraction) max n. """
    n_max = max(n for n, _ in sequence)
    ys = [y for n, y in sequence if n >= (1. - fraction) * n_max]
    return max(ys) - min(ys)

# ---------------------------------------------------------------- sub-additivity

def subadditivity_check(A, q, pairs=10000, max_len=40, seed=0):
    """ Smallest slack phi_m(sigma^n x) + phi_n(x) - phi_{m+n}(x) over random x and m + n <= max_len.

    Sub-additivity holds when the slack is nonnegative, which is the case for A >= 0 and 0 < q <= 1.
    """
    q = as_qparam(q)
    assertion(max_len < 2, DomainError("max_len must be >= 2"))
    rng = np.random.default_rng(seed)
    x = rng.integers(A.d, size=(pairs, max_len + A.memory - 1))
    values = _window_values(A, x)
    C = np.hstack([np.zeros((pairs, 1)), np.cumsum(values, axis=1)])
    n = rng.integers(1, max_len, size=pairs)
    m = rng.integers(1, max_len - n + 1)
    rows = np.arange(pairs)
    Sn, Smn = C[rows, n], C[rows, m + n]
    slack = _log_exp_q(Smn - Sn, q) + _log_exp_q(Sn, q) - _log_exp_q(Smn, q)
    i = int(np.argmin(slack))
    return SubadditivityCheck(float(slack[i]), int(m[i]), int(n[i]))

def weak_subadditivity_defect(A, q, x0_prefix=None, n_max=200):
    """ max over m + n <= n_max of a_{m+n} - a_m - a_n for a_n = log L_n(1)(x0). """
    buckets = SumBuckets(A, x0_prefix)
    a = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        a[n] = buckets.advance().log_total(q)
    i, j = np.meshgrid(np.arange(1, n_max), np.arange(1, n_max), indexing='ij')
    valid = i + j <= n_max
    defect = a[np.where(valid, i + j, 0)] - a[i] - a[j]
    return float(np.max(defect[valid]))

def kingman_average(A, q, p, n, samples=10000, seed=0, batch=1000):
    """ Monte Carlo mean of phi_n / n along the Bernoulli measure with weights p.

    Returns:
        KingmanAverage: mean, standard error and the accumulator summary.
    """
    q = as_qparam(q)
    p = as_prob_vector(p)
    assertion(p.size != A.d, DomainError("expected {0} weights, got {1}".format(A.d, p.size)))
    rng = np.random.default_rng(seed)
    acc = VarianceAccumulator()
    for start in range(0, samples, batch):
        size = min(batch, samples - start)
        x = rng.choice(A.d, size=(size, n + A.memory - 1), p=p)
        acc.extend(_log_exp_q(_window_sums(A, x, n), q) / n)
    error = acc.standard_error() if len(acc) > 1 else 0.
    return KingmanAverage(acc.mean(), error, acc.summary())

# ---------------------------------------------------------------- variational side

def variational_scan_subadd(A, q, grid_n=200, eps=variational.EPS):
    """ max of h(nu) + lim (1/n) int phi_n dnu over the Markov grid of A's state memory.

    For 0 < q < 1 the limit vanishes where int A dnu > 0 and such nu are the feasible set; the
    other grid points are excluded and counted. For q = 1 the limit is int A dnu.

    Raises:
        DomainError: q outside (0, 1], or no feasible grid point.
    """
    q = as_qparam(q)
    assertion(not (q.classical or 0. < q.q < 1.), DomainError("the asymptotic q-pressure is defined for 0 < q <= 1, got {0}".format(q.q)))
    k = state_memory(A)
    grid = variational.markov_grid(A.d, k, grid_n, eps)
    t = grid.points(0, len(grid))
    masses, pi = variational.batch_masses(t, A.d, k)
    h = variational.batch_q_entropy(masses, pi, A.d, k, 1.)
    integral = masses @ A.lift(k + 1).values
    if q.classical:
        value = h + integral
        feasible = np.ones(value.shape, dtype=bool)
    else:
        feasible = integral > 0.
        value = np.where(feasible, h, -np.inf)
    assertion(not np.any(feasible), DomainError("no grid measure has a positive integral of A"))
    i = int(np.argmax(value))
    mu = grid.measure(t[i])
    best = ks_entropy(mu) + (mu.integrate(A) if q.classical else 0.)
    return SubaddScan(float(best), mu, float(1. - np.mean(feasible)))
