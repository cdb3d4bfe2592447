#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 03-10-2026 09:41:06

    Tsallis theory on probability vectors: q-entropy, Renyi entropy, static q-pressure and
    the Meson-Vericat entropy of Bernoulli measures.

    The static q-pressure of beta a is the maximum over probability vectors p of
    H_q(p) + beta <a, p>. Two equilibria are provided: the closed form p ~ e_{2-q}(beta a)
    and the Lagrange point of the constrained problem. They agree only when q = 1.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

import math
import logging

from collections import namedtuple

import numpy as np
import pandas as pd

from scipy.optimize import brentq, minimize_scalar
from scipy.special import logsumexp

from . import config
from .qfun import as_qparam, log_q, exp_q
from .errors import DomainError, QExpDomain, ConvergenceError
from .toolkit.debugutils import assertion
from .shift import all_words

logger = logging.getLogger(__name__)

PROB_TOL = 1e-12
METHODS = ("closed", "stationary")

StaticEquilibrium = namedtuple('StaticEquilibrium', 'pressure p_star objective_at_p')

def as_prob_vector(p, tol=PROB_TOL):
    """ Validate a probability vector.

    Args:
        p (array-like): nonnegative entries summing to one.
        tol (float, optional): tolerance on the sum. Defaults to 1e-12.

    Returns:
        ndarray: p as floats.
    """
    p = np.array(p, dtype=float).ravel()
    assertion(p.size == 0, DomainError("empty probability vector"))
    assertion(not np.all(np.isfinite(p)) or np.any(p < 0.), DomainError("probability vector entries must be finite and >= 0"))
    assertion(abs(p.sum() - 1.) > tol, DomainError("probability vector sums to {0!r}".format(float(p.sum()))))
    return p

def q_entropy_vec(p, q):
    """ H_q(p) = sum_i p_i log_q(1/p_i), with 0 log_q(1/0) = 0. Shannon entropy when q = 1. """
    p = as_prob_vector(p)
    q = as_qparam(q)
    nz = p[p > 0.]
    return float(np.sum(nz * log_q(1. / nz, q)))

def shannon_entropy(p):
    return q_entropy_vec(p, 1.)

def renyi_entropy(p, q):
    """ log(sum_j p_j^q)/(1-q), the Shannon entropy in the classical regime. """
    p = as_prob_vector(p)
    q = as_qparam(q)
    if q.classical:
        return shannon_entropy(p)
    nz = p[p > 0.]
    return float(logsumexp(q.q * np.log(nz)) / (1. - q.q))

def objective(p, a, beta, q):
    """ H_q(p) + beta <a, p>. """
    p = as_prob_vector(p)
    return q_entropy_vec(p, q) + beta * float(np.dot(np.asarray(a, dtype=float), p))

def _equilibrium(p, a, beta, q):
    value = objective(p, a, beta, q)
    return StaticEquilibrium(value, p, value)

def static_q_pressure(a, beta, q, extension=None):
    """ Static q-pressure at the closed-form state p_j ~ e_{2-q}(beta a_j).

    Args:
        a (array-like): the d values of the potential.
        beta (float): inverse temperature.
        q (float, QParam): deformation parameter.
        extension (str, optional): domain extension of e_{2-q}, see qfun.exp_q.

    Raises:
        QExpDomain: a weight e_{2-q}(beta a_j) is undefined.
    """
    a = np.asarray(a, dtype=float)
    q = as_qparam(q)
    w = exp_q(beta * a, q.dual(), extension=extension)
    assertion(not np.all(np.isfinite(w)) or w.sum() <= 0., QExpDomain("weights e_(2-q)(beta a) do not normalise (beta={0})".format(beta)))
    return _equilibrium(w / w.sum(), a, beta, q)

def _log_stationary_mass(s, x, q):
    # log p_j at the multiplier lambda = lambda_edge -/+ s, -inf where p_j = 0
    if q < 1.:
        lam = np.max(x) - 1. / (1. - q) + s
    else:
        lam = np.max(x) + 1. / (q - 1.) - s
    base = 1. + (q - 1.) * (x - lam)
    with np.errstate(divide='ignore'):
        return math.log(q) / (1. - q) + np.log(np.maximum(base, 0.)) / (q - 1.)

def static_q_pressure_stationary(a, beta, q):
    """ Static q-pressure at the Lagrange point of H_q(p) + beta <a, p> on the simplex.

    The maximiser is p_j = q^(1/(1-q)) e_{2-q}(beta a_j - lambda), cut off at zero where
    the base vanishes (q > 1), with lambda chosen so that p sums to one.
    """
    a = np.asarray(a, dtype=float)
    q = as_qparam(q)
    assertion(q.q <= 0., DomainError("q must be > 0, got {0}".format(q.q)))
    x = beta * a
    if q.classical:
        return _equilibrium(np.exp(x - logsumexp(x)), a, beta, q)
    g = lambda s: logsumexp(_log_stationary_mass(s, x, q.q))
    # g is monotone in s with opposite limits at 0 and infinity
    sign = 1. if q.q < 1. else -1.
    lo, hi = 1., 1.
    for _ in range(2000):
        if sign * g(lo) > 0.:
            break
        lo /= 2.
    else:
        raise ConvergenceError("could not bracket the Lagrange multiplier (q={0}, beta={1})".format(q.q, beta))
    for _ in range(2000):
        if sign * g(hi) < 0.:
            break
        hi *= 2.
    else:
        raise ConvergenceError("could not bracket the Lagrange multiplier (q={0}, beta={1})".format(q.q, beta))
    s = brentq(g, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    logp = _log_stationary_mass(s, x, q.q)
    p = np.exp(logp - logsumexp(logp))
    return _equilibrium(p, a, beta, q)

def stationarity_defect(p, a, beta, q):
    """ Spread over the support of p of beta a_j + q/(1-q) p_j^(q-1) (beta a_j - log p_j classically).

    Zero exactly at the Lagrange point.
    """
    p = as_prob_vector(p)
    q = as_qparam(q)
    a = np.asarray(a, dtype=float)
    support = p > 0.
    if q.classical:
        g = beta * a[support] - np.log(p[support])
    else:
        g = beta * a[support] + q.q / (1. - q.q) * p[support] ** (q.q - 1.)
    return float(np.max(g) - np.min(g))

def loloi_p1(a, beta):
    """ The q = 1/2, d = 2 closed-form weight of the first symbol, (2-a_2 beta)^2/((2-a_1 beta)^2 + (2-a_2 beta)^2). """
    a1, a2 = float(a[0]), float(a[1])
    u, v = (2. - a1 * beta) ** 2, (2. - a2 * beta) ** 2
    assertion(u + v == 0., DomainError("undefined at beta={0}".format(beta)))
    return v / (u + v)

# ---------------------------------------------------------------- brute-force oracle

def _objective_rows(P, a, beta, q):
    # objective over rows of P, 0 log_q(1/0) = 0
    with np.errstate(divide='ignore', invalid='ignore'):
        if q.classical:
            terms = np.where(P > 0., -P * np.log(np.where(P > 0., P, 1.)), 0.)
        else:
            terms = np.where(P > 0., (np.where(P > 0., P, 1.) ** q.q - P) / (1. - q.q), 0.)
    return terms.sum(axis=1) + beta * P @ a

def _simplex_grid(d, n):
    if d == 2:
        i = np.arange(n + 1) / n
        return np.stack([i, 1. - i], axis=1)
    i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing='ij')
    keep = i + j <= n
    i, j = i[keep] / n, j[keep] / n
    return np.stack([i, j, np.clip(1. - i - j, 0., 1.)], axis=1)

def static_q_pressure_scan(a, beta, q, grid_n=2000):
    """ Brute-force maximum of H_q(p) + beta <a, p> over the simplex (d = 2 or 3).

    A barycentric grid of stride 1/grid_n is searched, then the best point is refined by
    one pass of bounded scalar searches along the directions that move mass between two
    symbols.
    """
    a = np.asarray(a, dtype=float)
    q = as_qparam(q)
    d = a.size
    assertion(d not in (2, 3), DomainError("the scan supports d = 2 or 3, got d={0}".format(d)))
    assertion(grid_n < 1, DomainError("grid_n must be >= 1"))
    P = _simplex_grid(d, grid_n)
    values = _objective_rows(P, a, beta, q)
    best = P[int(np.argmax(values))].copy()

    for i in range(d):
        for j in range(i + 1, d):
            e = np.zeros(d)
            e[i], e[j] = -1., 1.
            # t moves mass from symbol i to symbol j
            lo, hi = -best[j], best[i]
            if hi - lo <= 0.:
                continue
            f = lambda t: -_objective_rows(np.clip(best + t * e, 0., 1.)[None, :], a, beta, q)[0]
            result = minimize_scalar(f, bounds=(lo, hi), method='bounded', options=dict(xatol=1e-12))
            if result.fun < f(0.):
                best = np.clip(best + result.x * e, 0., 1.)
    best = best / best.sum()
    return _equilibrium(best, a, beta, q)

# ---------------------------------------------------------------- sweeps

def beta_sweep(a, q, beta_range, steps, method="closed", extension=None, threads=None):
    """ The curve beta -> P_q(beta a).

    Args:
        a (array-like): potential values.
        q (float, QParam): deformation parameter.
        beta_range (tuple): (beta_min, beta_max).
        steps (int): number of points (a single step evaluates beta_min).
        method (str, optional): "closed" or "stationary". Defaults to "closed".
        extension (str, optional): domain extension for the closed form.
        threads (int, optional): worker threads, defaults to QTHERMO_THREADS.

    Returns:
        pandas.DataFrame: columns beta, pressure. Inadmissible beta give NaN pressure.
    """
    assertion(method not in METHODS, DomainError("unknown method '{0}'".format(method)))
    assertion(steps < 1, DomainError("steps must be >= 1"))
    betas = np.linspace(beta_range[0], beta_range[1], steps) if steps > 1 else np.array([float(beta_range[0])])

    def point(beta):
        try:
            if method == "closed":
                return static_q_pressure(a, beta, q, extension=extension).pressure
            return static_q_pressure_stationary(a, beta, q).pressure
        except QExpDomain:
            return float('nan')

    pressures = config.parallel_map(point, betas, max_workers=threads)
    gaps = int(np.sum(np.isnan(pressures)))
    if gaps:
        logger.info("beta sweep: %d inadmissible points", gaps)
    return pd.DataFrame(dict(beta=betas, pressure=pressures))

def second_differences(curve):
    """ Discrete second differences of the pressure column (NaN around gaps). """
    return np.diff(curve['pressure'].to_numpy(), n=2)

# ---------------------------------------------------------------- Bernoulli measures

def meson_vericat_bernoulli(p, q, n_check=6):
    """ Meson-Vericat entropy log(sum_i p_i^q) of the Bernoulli measure of p.

    The finite-n quotients (1/n) log sum_{|w|=n} mu[w]^q, n = 1..n_check, are computed by
    enumeration and must agree with the limit.
    """
    p = as_prob_vector(p)
    q = as_qparam(q)
    assertion(not 0. < q.q < 1., DomainError("q must lie in (0, 1), got {0}".format(q.q)))
    value = float(logsumexp(q.q * np.log(p[p > 0.])))
    quotients = meson_vericat_quotients(p, q, n_check)
    spread = float(np.max(np.abs(quotients - value)))
    if spread > 1e-12 * max(1., abs(value)):
        logger.warning("finite-n quotients deviate from the limit by %.3e", spread)
    return value

def meson_vericat_quotients(p, q, n_max):
    """ (1/n) log sum_{|w|=n} mu[w]^q for n = 1..n_max by enumeration of cylinders. """
    p = as_prob_vector(p)
    q = as_qparam(q)
    result = np.empty(n_max)
    with np.errstate(divide='ignore'):
        logp = np.log(p)
    for n in range(1, n_max + 1):
        logmass = logp[all_words(p.size, n) - 1].sum(axis=1)
        logmass = logmass[np.isfinite(logmass)]
        result[n - 1] = logsumexp(q.q * logmass) / n
    return result

def bernoulli_variational_entropy(p, q):
    """ (Z^(2-q) - 1)/(1-q) with Z = sum_i p_i^(1/(2-q)); Shannon entropy when q = 1.

    This is the infimum over memory-one functions u of sum_x mu[x] log_q(sum_a e^{u(a x)}/e^{u(x)})
    for the Bernoulli measure of p.
    """
    p = as_prob_vector(p)
    q = as_qparam(q)
    if q.classical:
        return shannon_entropy(p)
    assertion(q.q >= 2., DomainError("q must be < 2, got {0}".format(q.q)))
    logZ = logsumexp(np.log(p[p > 0.]) / (2. - q.q))
    return float(np.expm1((2. - q.q) * logZ) / (1. - q.q))
