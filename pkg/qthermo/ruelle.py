#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 04-10-2026 10:12:33

    Classical thermodynamic formalism for locally constant potentials on the full shift:
    transfer matrices, leading eigendata, normalisation, Jacobians, Markov equilibrium
    states and the entropies of Markov measures.

    A potential A of memory m acts on functions of the first k = max(m - 1, 1) symbols
    (states). A is lifted to memory k + 1 and its table A2[a, x] = A(a x) has a row per
    prepended symbol a and a column per state x. The state of a x is pre(a, x) = (a d^k + x) // d.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

import logging

from collections import namedtuple

import numpy as np

from scipy.optimize import minimize
from scipy.special import logsumexp

from . import config
from .qfun import as_qparam, log_q, exp_q
from .shift import Potential
from .errors import DomainError, ConvergenceError
from .toolkit.debugutils import assertion

logger = logging.getLogger(__name__)

EIG_TOL = 1e-13
MAX_ITER = 1000000
MAX_MEMORY = 6
MAX_U_MEMORY = 4
STOCHASTIC_TOL = 1e-10

LeadingEig = namedtuple('LeadingEig', 'lam h nu')
Normalized = namedtuple('Normalized', 'logJ lam h')
MesonVericat = namedtuple('MesonVericat', 'limit quotients')

def state_memory(A):
    return max(A.memory - 1, 1)

def pre_index(d, k):
    """ pre[a, x] = state of the word a x, for a in [0, d) and states x in [0, d^k). """
    a = np.arange(d)[:, None]
    x = np.arange(d ** k)[None, :]
    return (a * d ** k + x) // d

def successors(d, n):
    """ successors[w, b] = state of w followed by b, for states w in [0, n). """
    return (np.arange(n)[:, None] * d) % n + np.arange(d)[None, :]

def transition_matrix(T, d):
    """ The (n, n) state transition matrix of a table T[w, b]. """
    n = T.shape[0]
    P = np.zeros((n, n))
    P[np.arange(n)[:, None], successors(d, n)] = T
    return P

def split_table(A):
    """ (k, A2) with A2[a, x] = A(a x) of shape (d, d^k). """
    assertion(A.memory > MAX_MEMORY, DomainError("memory {0} exceeds the size guard {1}".format(A.memory, MAX_MEMORY)))
    k = state_memory(A)
    return k, A.table(k + 1)

class TransferMatrix:
    """ The Ruelle operator L_A f(x) = sum_a e^{A(a x)} f(a x) on functions of k symbols.

    Args:
        A (Potential): potential of memory m <= 6.
    """

    def __init__(self, A):
        self.d = A.d
        self.k, A2 = split_table(A)
        n = self.d ** self.k
        self.entries = np.zeros((n, n))
        pre = pre_index(self.d, self.k)
        cols = np.broadcast_to(np.arange(n)[None, :], pre.shape)
        np.add.at(self.entries, (cols.ravel(), pre.ravel()), np.exp(A2).ravel())

    def __call__(self, f):
        return self.entries @ f

    def __repr__(self):
        return "TransferMatrix(d={0}, k={1})".format(self.d, self.k)

def transfer_matrix(A):
    return TransferMatrix(A)

def power_iteration(M, tol=EIG_TOL, max_iter=MAX_ITER):
    """ Leading eigenpair of a primitive nonnegative matrix.

    The iterate is kept with unit sum, so sum(M v) is the eigenvalue estimate. Iteration stops
    when successive iterates differ by at most tol relative to their largest entry.

    Returns:
        tuple: (lam, v) with v summing to one.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    v = np.full(n, 1. / n)
    for i in range(int(max_iter)):
        w = M @ v
        lam = w.sum()
        assertion(not lam > 0., ConvergenceError("power iteration collapsed (eigenvalue {0})".format(lam)))
        w /= lam
        if np.max(np.abs(w - v)) <= tol * np.max(w):
            logger.debug("power iteration converged after %d iterations", i + 1)
            return float(lam), w
        v = w
    raise ConvergenceError("power iteration did not converge in {0} iterations".format(max_iter), best=(float(lam), v))

def leading_eig(M, tol=EIG_TOL):
    """ Leading eigenvalue with right (h) and left (nu) eigenvectors, sum(nu) = 1 and nu . h = 1. """
    M = M.entries if isinstance(M, TransferMatrix) else np.asarray(M, dtype=float)
    lam, h = power_iteration(M, tol)
    _, nu = power_iteration(M.T, tol)
    h = h / np.dot(nu, h)
    assertion(not (np.all(h > 0.) and np.all(nu > 0.)), ConvergenceError("leading eigenvectors are not positive"))
    return LeadingEig(lam, h, nu)

def classical_pressure(A):
    """ P(A) = log of the leading eigenvalue of L_A. """
    return float(np.log(leading_eig(TransferMatrix(A)).lam))

def normalize(A):
    """ The normalised potential log J = A + log h - log h o sigma - log lambda.

    Returns:
        Normalized: (logJ, lam, h) with logJ of memory k + 1.
    """
    M = TransferMatrix(A)
    lam, h, _ = leading_eig(M)
    k, A2 = split_table(A)
    logh = np.log(h)
    logJ = A2 + logh[pre_index(A.d, k)] - logh[None, :] - np.log(lam)
    return Normalized(Potential(A.d, k + 1, logJ.ravel()), lam, h)

def jacobian_defect(logJ):
    """ max over states x of |sum_a J(a x) - 1|. """
    J = np.exp(logJ.table(max(logJ.memory, 2)))
    return float(np.max(np.abs(J.sum(axis=0) - 1.)))

def stationary_vector(P, tol=1e-15, max_squarings=64):
    """ Stationary distribution of a primitive stochastic matrix by repeated squaring of P. """
    Q = np.asarray(P, dtype=float)
    for _ in range(max_squarings):
        Q2 = Q @ Q
        Q2 /= Q2.sum(axis=1, keepdims=True)
        done = np.max(np.abs(Q2 - Q)) <= tol
        Q = Q2
        if done:
            break
    pi = Q.mean(axis=0)
    pi /= pi.sum()
    defect = float(np.max(np.abs(pi @ P - pi)))
    assertion(defect > STOCHASTIC_TOL, ConvergenceError("stationary vector not found (defect {0:.3e})".format(defect), best=pi))
    return pi

class MarkovMeasure:
    """ A stationary Markov measure of memory k on the full shift.

    Args:
        k (int): memory, the state is the last k symbols.
        P (ndarray): (d^k, d^k) row-stochastic matrix, nonzero only on w -> w[1:]b.
        pi (ndarray): stationary probability vector over states.
        d (int): alphabet size.
    """

    def __init__(self, k, P, pi, d):
        P = np.asarray(P, dtype=float)
        pi = np.asarray(pi, dtype=float)
        n = d ** k
        assertion(P.shape != (n, n) or pi.shape != (n,), DomainError("expected a ({0}, {0}) matrix and a length {0} vector".format(n)))
        assertion(np.any(P < 0.) or np.max(np.abs(P.sum(axis=1) - 1.)) > 1e-12, DomainError("P is not row-stochastic"))
        assertion(np.any(pi < 0.) or abs(pi.sum() - 1.) > 1e-12, DomainError("pi is not a probability vector"))
        assertion(np.max(np.abs(pi @ P - pi)) > STOCHASTIC_TOL, DomainError("pi is not stationary for P"))
        self.k, self.P, self.pi, self.d = k, P, pi, d
        T = self._table()
        mask = np.zeros_like(P, dtype=bool)
        mask[np.arange(n)[:, None], successors(d, n)] = True
        assertion(np.any(P[~mask] != 0.), DomainError("P has transitions between non-overlapping states"))
        self.T = T

    def _table(self):
        n = self.d ** self.k
        return self.P[np.arange(n)[:, None], successors(self.d, n)]

    @classmethod
    def bernoulli(cls, p):
        p = np.asarray(p, dtype=float)
        d = p.size
        return cls(1, np.tile(p, (d, 1)), p, d)

    @classmethod
    def from_transitions(cls, P, d=None):
        """ Markov measure of a row-stochastic P over states of length k (d defaults to P's size, k = 1). """
        P = np.asarray(P, dtype=float)
        n = P.shape[0]
        d = n if d is None else d
        k = int(round(np.log(n) / np.log(d)))
        assertion(d ** k != n, DomainError("matrix size {0} is not a power of d={1}".format(n, d)))
        return cls(k, P, stationary_vector(P), d)

    @classmethod
    def from_table(cls, T, d):
        """ From T[w, b] = probability of appending b to state w. """
        T = np.asarray(T, dtype=float)
        n = T.shape[0]
        k = int(round(np.log(n) / np.log(d)))
        P = transition_matrix(T, d)
        return cls(k, P, stationary_vector(P), d)

    def transition_table(self):
        """ T[w, b], the probability that state w is followed by symbol b. """
        return self.T

    def masses(self, length):
        """ Masses of all cylinders of the given length, lexicographic order. """
        n = self.d ** self.k
        if length <= self.k:
            return self.pi.reshape(self.d ** length, -1).sum(axis=1)
        m = self.pi
        for _ in range(length - self.k):
            m = (m[:, None] * self.T[np.arange(m.size) % n]).ravel()
        return m

    def jacobian(self):
        """ J(w) = mu[w]/mu[sigma w] on words of length k + 1 (0 where mu[w] = 0). """
        m = self.masses(self.k + 1)
        below = self.pi[np.arange(m.size) % self.d ** self.k]
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.where(m > 0., m / np.where(below > 0., below, 1.), 0.)

    def log_jacobian(self):
        with np.errstate(divide='ignore'):
            return np.log(self.jacobian())

    def lift(self, k):
        """ The same measure described with states of length k >= self.k. """
        assertion(k < self.k, DomainError("cannot lift memory {0} to {1}".format(self.k, k)))
        if k == self.k:
            return self
        n = self.d ** k
        T = self.T[np.arange(n) % self.d ** self.k]
        P = transition_matrix(T, self.d)
        return MarkovMeasure(k, P, self.masses(k), self.d)

    def integrate(self, A):
        """ The integral of a locally constant potential. """
        assertion(A.d != self.d, DomainError("alphabet sizes differ"))
        return float(np.dot(self.masses(A.memory), A.values))

    def __repr__(self):
        return "MarkovMeasure(d={0}, k={1})".format(self.d, self.k)

class MixtureMeasure:
    """ A convex combination of invariant measures; not Markov in general. """

    def __init__(self, components, weights):
        weights = np.asarray(weights, dtype=float)
        assertion(len(components) != weights.size, DomainError("one weight per component"))
        assertion(np.any(weights < 0.) or abs(weights.sum() - 1.) > 1e-12, DomainError("weights must be a probability vector"))
        assertion(len({c.d for c in components}) != 1, DomainError("alphabet sizes differ"))
        self.components = list(components)
        self.weights = weights
        self.d = components[0].d

    def masses(self, length):
        return sum(w * c.masses(length) for w, c in zip(self.weights, self.components))

    def integrate(self, A):
        return float(np.dot(self.masses(A.memory), A.values))

def equilibrium_markov(logJ):
    """ The invariant measure mu_{log J} of a normalised potential log J.

    The state marginal is the stationary vector of the backward chain x -> pre(a, x) with
    probability J(a x), and mu[w b] = J(w b) mu[(w b)[1:]] gives the forward transitions.
    """
    logJ = logJ.lift(2) if logJ.memory == 1 else logJ
    d, k = logJ.d, logJ.memory - 1
    n = d ** k
    J = np.exp(logJ.values)
    defect = jacobian_defect(logJ)
    assertion(defect > STOCHASTIC_TOL, DomainError("not a Jacobian: sum_a J(a x) deviates from 1 by {0:.3e}".format(defect)))
    Jt = J.reshape(d, n)
    B = np.zeros((n, n))
    cols = np.broadcast_to(np.arange(n)[None, :], (d, n))
    np.add.at(B, (cols.ravel(), pre_index(d, k).ravel()), Jt.ravel())
    pi = stationary_vector(B)
    words = np.arange(n * d)
    T = (J[words] * pi[words % n]).reshape(n, d) / pi[:, None]
    T /= T.sum(axis=1, keepdims=True)
    P = transition_matrix(T, d)
    return MarkovMeasure(k, P, pi, d)

# ---------------------------------------------------------------- entropies

def _common(mu1, mu2):
    assertion(mu1.d != mu2.d, DomainError("alphabet sizes differ"))
    k = max(mu1.k, mu2.k)
    return mu1.lift(k), mu2.lift(k)

def ks_entropy(mu):
    """ Kolmogorov-Sinai entropy -int log J dmu (Rokhlin's formula). """
    m = mu.masses(mu.k + 1)
    J = mu.jacobian()
    support = m > 0.
    return float(-np.sum(m[support] * np.log(J[support])))

def q_entropy_markov(mu, q):
    """ H_q(mu) = int log_q(1/J) dmu for the Jacobian J of mu. """
    q = as_qparam(q)
    m = mu.masses(mu.k + 1)
    J = mu.jacobian()
    support = m > 0.
    return float(np.sum(m[support] * log_q(1. / J[support], q)))

def relative_q_entropy(mu1, mu2, q):
    """ int log_q(1/J2) dmu1 - int log_q(1/J1) dmu1. Not sign-definite when q != 1. """
    q = as_qparam(q)
    mu1, mu2 = _common(mu1, mu2)
    m = mu1.masses(mu1.k + 1)
    J1, J2 = mu1.jacobian(), mu2.jacobian()
    support = m > 0.
    if np.any(J2[support] <= 0.):
        return float('inf')
    return float(np.sum(m[support] * (log_q(1. / J2[support], q) - log_q(1. / J1[support], q))))

def kl_rate(mu1, mu2):
    """ Classical KL divergence rate sum_w pi1[w] sum_b T1[w, b] log(T1[w, b]/T2[w, b]). """
    mu1, mu2 = _common(mu1, mu2)
    T1, T2 = mu1.transition_table(), mu2.transition_table()
    weight = mu1.pi[:, None] * T1
    support = weight > 0.
    if np.any(T2[support] <= 0.):
        return float('inf')
    return float(np.sum(weight[support] * np.log(T1[support] / T2[support])))

def meson_vericat_markov(mu, q, n_max=8):
    """ (1/n) log sum_{|w|=n} mu[w]^q for n = 1..n_max and its limit log rho(P^q) (entrywise power). """
    q = as_qparam(q)
    quotients = np.empty(n_max)
    for n in range(1, n_max + 1):
        m = mu.masses(n)
        quotients[n - 1] = logsumexp(q.q * np.log(m[m > 0.])) / n
    Pq = np.where(mu.P > 0., mu.P, 0.) ** q.q
    rho, _ = power_iteration(Pq)
    return MesonVericat(float(np.log(rho)), quotients)

def q_transfer_action(A, q, f, extension=None):
    """ sum_a e_q^{A(a x)} f(a x) for f a vector over states of length k = max(m - 1, 1). """
    k, A2 = split_table(A)
    f = np.asarray(f, dtype=float)
    assertion(f.size != A.d ** k, DomainError("expected a vector of length {0}".format(A.d ** k)))
    w = exp_q(A2, q, extension=extension)
    return np.sum(w * f[pre_index(A.d, k)], axis=0)

# ---------------------------------------------------------------- variational q-entropy

class _VariationalObjective:
    """ t -> sum_x mu[x] log_q(S_x), S_x = sum_a e^{t(a x) - t(x)}, for t a table over words of length r. """

    def __init__(self, masses, d, r, q):
        self.m = masses
        self.d, self.r, self.q = d, r, q
        x = np.arange(d ** r)
        # index of the first r symbols of a x
        self.ax = np.arange(d)[:, None] * d ** (r - 1) + (x // d)[None, :]

    def __call__(self, t):
        z = t[self.ax] - t[None, :]
        logS = logsumexp(z, axis=0)
        k = 1. - self.q.q
        if self.q.classical:
            value = np.dot(self.m, logS)
            coef = self.m
        else:
            value = np.dot(self.m, np.expm1(k * logS) / k)
            coef = self.m * np.exp(k * logS)
        weights = np.exp(z - logS[None, :])
        grad = np.zeros_like(t)
        np.add.at(grad, self.ax.ravel(), (coef[None, :] * weights).ravel())
        grad -= coef
        return float(value), grad

def _lift_table(t, d, r):
    # memory of t is inferred from its size
    m = int(round(np.log(t.size) / np.log(d)))
    return np.repeat(t, d ** (r - m))

def q_entropy_variational(mu, q, u_memory, restarts=20, seed=0, threads=None):
    """ Infimum of int log_q(sum_a u(a x)/u(x)) dmu over positive u of memory u_memory.

    u = e^t is optimised with BFGS. Starting points: a ladder of warm starts through the
    memories 1..u_memory, t = 0, t = log J when mu is Markov with k + 1 <= u_memory, and
    `restarts` seeded random tables. The smallest value found is returned.

    Args:
        mu (MarkovMeasure, MixtureMeasure): invariant measure.
        q (float, QParam): deformation parameter.
        u_memory (int): memory of u, 1..4.
        restarts (int, optional): random restarts. Defaults to 20.
        seed (int, optional): seed of the restarts. Defaults to 0.
    """
    q = as_qparam(q)
    assertion(not 1 <= u_memory <= MAX_U_MEMORY, DomainError("u_memory must be in [1, {0}]".format(MAX_U_MEMORY)))
    d = mu.d
    r = u_memory

    def solve(objective, t0):
        result = minimize(objective, t0, jac=True, method='BFGS', options=dict(gtol=1e-10, maxiter=2000))
        if not result.success:
            logger.debug("BFGS: %s (value %.12g)", result.message, result.fun)
        value, _ = objective(result.x)
        start, _ = objective(t0)
        if start < value:
            return start, t0, result.success
        return value, result.x, result.success

    # warm-start ladder
    t = np.zeros(d)
    for j in range(1, r + 1):
        objective = _VariationalObjective(mu.masses(j), d, j, q)
        value, t, ok = solve(objective, _lift_table(t, d, j))
    best = (value, t, ok)

    objective = _VariationalObjective(mu.masses(r), d, r, q)
    starts = [np.zeros(d ** r)]
    if isinstance(mu, MarkovMeasure) and mu.k + 1 <= r:
        J = mu.jacobian()
        if np.all(J > 0.):
            starts.append(_lift_table(np.log(J), d, r))
    rng = np.random.default_rng(seed)
    starts.extend(rng.normal(size=(restarts, d ** r)))
    results = config.parallel_map(lambda t0: solve(objective, t0), starts, max_workers=threads)
    for result in results:
        if result[0] < best[0]:
            best = result
    if not best[2]:
        logger.warning("variational q-entropy: optimiser did not converge, best value %.12g", best[0])
    return float(best[0])
