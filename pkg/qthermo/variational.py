#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 09-10-2026 11:18:45

    Brute-force variational oracles over stationary Markov measures on {1, 2}^N.

    A Markov measure of memory k is parametrised by t[w] = T[w, 2], the probability that the
    state w is followed by the symbol 2. Grids run over t[w] in {i / grid_n} clipped to
    [eps, 1 - eps], in lexicographic order of the grid index, and are evaluated in batches.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

import logging

from collections import namedtuple

import numpy as np
import pandas as pd

from scipy.optimize import minimize

from . import config
from .qfun import as_qparam, log_q
from .ruelle import successors, state_memory, MarkovMeasure, MixtureMeasure, q_entropy_markov, q_entropy_variational
from .qsolve import q_equilibrium
from .errors import DomainError, ConvergenceError, NoPositiveBranch
from .toolkit.debugutils import assertion
from .toolkit.accumulate import VarianceAccumulator
from .toolkit.report import Report

logger = logging.getLogger(__name__)

EPS = 1e-4
GRID_N = 400
SURFACE_GRID_N = 200
REFINE_ITER = 400
CHUNK = 100000
MAX_GRID_POINTS = 4000000
MAX_STATE_MEMORY = 2
CONCAVITY_TOL = 1e-10

ScanResult = namedtuple('ScanResult', 'value argmax grid_n refined excluded_fraction')
CrossCheck = namedtuple('CrossCheck', 'scan c defect')

class MarkovGrid:
    """ The grid of Markov measures of memory k on {1, 2}^N.

    Args:
        d (int): alphabet size, must be 2.
        k (int): memory, 1 or 2.
        grid_n (int): each t[w] runs over i / grid_n, i = 0..grid_n.
        eps (float, optional): clipping of t. Defaults to 1e-4.
    """

    def __init__(self, d, k, grid_n, eps=EPS):
        assertion(d != 2, DomainError("Markov grids are implemented for d = 2, got {0}".format(d)))
        assertion(not 1 <= k <= MAX_STATE_MEMORY, DomainError("memory must be in [1, {0}], got {1}".format(MAX_STATE_MEMORY, k)))
        assertion(grid_n < 1, DomainError("grid_n must be >= 1"))
        self.d, self.k, self.grid_n, self.eps = d, k, grid_n, eps
        self.axis = np.clip(np.linspace(0., 1., grid_n + 1), eps, 1. - eps)
        self.dim = d ** k
        self.size = self.axis.size ** self.dim
        assertion(self.size > MAX_GRID_POINTS, DomainError("{0} grid points exceed the cap {1}".format(self.size, MAX_GRID_POINTS)))

    def __len__(self):
        return self.size

    def points(self, start, stop):
        """ t for the flat grid indices start..stop-1, shape (stop - start, d^k). """
        index = np.unravel_index(np.arange(start, stop), (self.axis.size,) * self.dim)
        return np.stack([self.axis[i] for i in index], axis=1)

    def table(self, t):
        return np.stack([1. - np.asarray(t), np.asarray(t)], axis=-1)

    def measure(self, t):
        return MarkovMeasure.from_table(self.table(t), self.d)

def markov_grid(d, k, grid_n, eps=EPS):
    return MarkovGrid(d, k, grid_n, eps)

def batch_masses(t, d, k):
    """ Cylinder masses of length k + 1 and stationary state vectors for a batch of parameters.

    Args:
        t (ndarray): (N, d^k) probabilities of appending the symbol 2.

    Returns:
        tuple: masses (N, d^(k+1)) in lexicographic order, pi (N, d^k).
    """
    t = np.atleast_2d(t)
    N, n = t.shape
    T = np.stack([1. - t, t], axis=-1)
    P = np.zeros((N, n, n))
    P[:, np.arange(n)[:, None], successors(d, n)] = T
    # pi P = pi with the last equation replaced by sum(pi) = 1
    M = np.swapaxes(P, 1, 2) - np.eye(n)
    M[:, -1, :] = 1.
    b = np.zeros((N, n, 1))
    b[:, -1, 0] = 1.
    pi = np.linalg.solve(M, b)[..., 0]
    masses = (pi[:, :, None] * T).reshape(N, n * d)
    return masses, pi

def batch_q_entropy(masses, pi, d, k, q):
    """ H_q = sum_w mu[w] log_q(1/J(w)) over words of length k + 1, per row. """
    q = as_qparam(q)
    n = d ** k
    below = pi[:, np.arange(n * d) % n]
    return np.sum(masses * log_q(below / masses, q), axis=1)

def scan_objective(t, A, q, k):
    """ H_q(mu_t) + int A dmu_t for a batch t of memory-k chains. """
    masses, pi = batch_masses(t, A.d, k)
    return batch_q_entropy(masses, pi, A.d, k, q) + masses @ A.lift(k + 1).values

def _refine(A, q, k, t0, eps):
    f = lambda t: -float(scan_objective(np.clip(t, eps, 1. - eps)[None, :], A, q, k)[0])
    result = minimize(f, t0, method='Nelder-Mead', options=dict(maxiter=REFINE_ITER, xatol=1e-12, fatol=1e-15))
    t = np.clip(result.x, eps, 1. - eps)
    return t, -f(t)

def q_pressure_scan(A, q, grid_n=GRID_N, refine=True, eps=EPS, threads=None):
    """ sup of H_q(mu) + int A dmu over the Markov grid of A's state memory k = max(m - 1, 1).

    The grid is evaluated in chunks (possibly concurrently); ties go to the lowest grid index.
    The best grid point is refined by Nelder-Mead (400 iterations) and the value reported is
    the re-evaluation at the returned measure.

    Args:
        A (Potential): potential with d = 2 and memory <= 3.
        q (float, QParam): deformation parameter.
        grid_n (int, optional): grid resolution. Defaults to 400.
        refine (bool, optional): run the refinement. Defaults to True.
        eps (float, optional): clipping of transition probabilities. Defaults to 1e-4.
        threads (int, optional): worker threads, defaults to QTHERMO_THREADS.

    Returns:
        ScanResult: value, argmax (MarkovMeasure), grid_n, refined, excluded_fraction (0).
    """
    q = as_qparam(q)
    k = state_memory(A)
    grid = markov_grid(A.d, k, grid_n, eps)

    def evaluate(start):
        t = grid.points(start, min(start + CHUNK, len(grid)))
        values = scan_objective(t, A, q, k)
        i = int(np.argmax(values))
        return float(values[i]), start + i

    results = config.parallel_map(evaluate, range(0, len(grid), CHUNK), max_workers=threads)
    value, index = max(results, key=lambda r: (r[0], -r[1]))
    t = grid.points(index, index + 1)[0]
    refined = False
    if refine:
        t_refined, v_refined = _refine(A, q, k, t, eps)
        if v_refined > value:
            t, refined = t_refined, True
    mu = grid.measure(t)
    value = q_entropy_markov(mu, q) + mu.integrate(A)
    logger.debug("q-pressure scan: %.12g at t = %s (grid %d, refined %s)", value, np.array2string(t, precision=6), grid_n, refined)
    return ScanResult(float(value), mu, grid_n, refined, 0.)

def scan_crosscheck(A, q, grid_n=GRID_N, **opts):
    """ Compare the scan with the constant c of the positive solution branch.

    The scan value is at least c up to grid error, since the equilibrium of the branch is a
    Markov measure of the scanned memory. Potentials without a positive branch are reported
    with c = None and a warning.

    Returns:
        CrossCheck: scan (ScanResult), c, defect = scan value - c.
    """
    scan = q_pressure_scan(A, q, grid_n)
    try:
        eq = q_equilibrium(A, q, **opts)
    except NoPositiveBranch:
        logger.warning("no positive solution branch, the scan value %.12g is not checked", scan.value)
        return CrossCheck(scan, None, None)
    return CrossCheck(scan, eq.pressure, scan.value - eq.pressure)

# ---------------------------------------------------------------- surfaces

def entropy_surface(q, grid_n=SURFACE_GRID_N, eps=EPS):
    """ H_q of the memory-1 chains on {1, 2}^N over the (P12, P21) grid.

    Returns:
        pandas.DataFrame: columns P12, P21, H_q, one row per grid point.
    """
    grid = markov_grid(2, 1, grid_n, eps)
    t = grid.points(0, len(grid))
    masses, pi = batch_masses(t, 2, 1)
    H = batch_q_entropy(masses, pi, 2, 1, q)
    return pd.DataFrame(dict(P12=t[:, 0], P21=1. - t[:, 1], H_q=H))

def _surface_value(P12, P21, q):
    t = np.stack([P12, 1. - P21], axis=1)
    masses, pi = batch_masses(t, 2, 1)
    return batch_q_entropy(masses, pi, 2, 1, q)

def surface_concavity(q, segments=1000, seed=0, eps=EPS, tol=CONCAVITY_TOL):
    """ Midpoint tests of H_q on memory-1 chains.

    Along the diagonal P12 = P21 the chain is symmetric and H_q is the q-entropy of (1 - p, p),
    which is concave; these tests pass or fail. Midpoints of general segments of the (P12, P21)
    square are reported without a verdict.

    Returns:
        Report: {'diagonal': {...,'passed'}, 'general': {...}}.
    """
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(eps, 1. - eps, size=(2, segments))
    diagonal = _surface_value((a + b) / 2., (a + b) / 2., q) - (_surface_value(a, a, q) + _surface_value(b, b, q)) / 2.
    a, b = rng.uniform(eps, 1. - eps, size=(2, segments, 2))
    m = (a + b) / 2.
    general = _surface_value(m[:, 0], m[:, 1], q) - (_surface_value(a[:, 0], a[:, 1], q) + _surface_value(b[:, 0], b[:, 1], q)) / 2.
    report = Report()
    report['diagonal'] = dict(passed=bool(np.min(diagonal) >= -tol), min_defect=float(np.min(diagonal)), segments=segments)
    report['general'] = dict(min_defect=float(np.min(general)), violations=int(np.sum(general < -tol)), segments=segments)
    return report

# ---------------------------------------------------------------- affinity

def entropy_affinity_defect(mu1, mu2, lam, q, u_memory=2, restarts=4, seed=0):
    """ H(lam mu1 + (1 - lam) mu2) - lam H(mu1) - (1 - lam) H(mu2) for H the variational q-entropy.

    The mixture is not Markov; all three entropies use the same u_memory so that the defect is
    that of a single concave functional.
    """
    assertion(not 0. <= lam <= 1., DomainError("lam must be in [0, 1], got {0}".format(lam)))
    # single-component mixtures so that all three problems share the same starting points
    H = lambda mu: q_entropy_variational(MixtureMeasure([mu], [1.]), q, u_memory, restarts=restarts, seed=seed)
    mix = MixtureMeasure([mu1, mu2], [lam, 1. - lam])
    return H(mix) - (lam * H(mu1) + (1. - lam) * H(mu2))

def entropy_affinity_report(q, samples=50, u_memory=2, restarts=4, seed=0, tol=1e-6):
    """ Distribution of affinity defects over random pairs of memory-1 chains and random lam.

    Optimiser failures are counted and skipped.

    Returns:
        Report: defects (count, mean, min, max, std), failures, below_floor (defects < -tol).
    """
    rng = np.random.default_rng(seed)
    grid = markov_grid(2, 1, 1)
    acc = VarianceAccumulator()
    failures, below = 0, 0
    for _ in range(samples):
        t1, t2 = rng.uniform(0.05, 0.95, size=(2, 2))
        lam = float(rng.uniform(0., 1.))
        try:
            defect = entropy_affinity_defect(grid.measure(t1), grid.measure(t2), lam, q, u_memory, restarts=restarts, seed=seed)
        except (ConvergenceError, DomainError) as e:
            logger.debug("affinity sample failed: %s", e)
            failures += 1
            continue
        acc.push(defect)
        below += int(defect < -tol)
    report = Report()
    report['defects'] = acc.summary()
    report['failures'] = failures
    report['below_floor'] = below
    return report
