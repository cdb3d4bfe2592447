#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 06-10-2026 14:27:51

    Solutions of the deformed Ruelle equation

        sum_a e_{q~}^{A(a x) + phi(a x) - phi(x) - c} = 1    for every context x,

    for locally constant A, with q~ = 2 - q. The constant c is the q-pressure of A when every
    summand is strictly positive, and the summands then form the Jacobian of the q-equilibrium
    state. Roots are searched by homotopy continuation from A = 0 and by a multistart Newton
    lattice; phi is gauged to phi(first context) = 0.

    Also here: the closed-form examples used as oracles, the A_q transform and the q = 1/2
    construction of deformed solutions from classical eigendata, and pressure derivatives.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

import math
import logging
import itertools

from collections import namedtuple

import numpy as np

from . import config
from .qfun import as_qparam, log_q, exp_q, dexp_q
from .shift import Potential
from .ruelle import split_table, pre_index, leading_eig, TransferMatrix, equilibrium_markov, q_entropy_markov
from .errors import DomainError, ConvergenceError, NoPositiveBranch
from .toolkit.debugutils import assertion
from .toolkit.optimise import NewtonOptimiser

logger = logging.getLogger(__name__)

MAX_MEMORY = 4
MAX_CONTEXTS = 32
NEWTON_TOL = 1e-12
RESIDUAL_TOL = 1e-10
DEDUP_TOL = 1e-7
POSITIVE_MARGIN = 1e-12
HOMOTOPY_STEPS = 64
MIN_STEP = 1e-4
MAX_STARTS = 2000
PHI_GRID = (-3., -1.5, 0., 1.5, 3.)
C_OFFSETS = (0., -2., 2., -4., 4.)
BOWEN_TOL = 1e-8
H_STEP = 1e-4

SolveResult = namedtuple('SolveResult', 'phi c residual summands_positive jacobian branch_id boundary')
QEquilibrium = namedtuple('QEquilibrium', 'pressure mu branch bowen_c')
PressureDerivative = namedtuple('PressureDerivative', 'dPds loo7_lhs loo7_rhs loo7_defect')
ExplimeqFamily = namedtuple('ExplimeqFamily', 'a12 a22 phi2 c')

class BranchList(list):
    """ Solution branches sorted by c (descending). continuation_t is the homotopy parameter
        at which continuation from A = 0 broke down, or None. """

    def __init__(self, items=(), continuation_t=None):
        super(BranchList, self).__init__(items)
        self.continuation_t = continuation_t

def _extension(even_extension=False, allow_boundary=False):
    if even_extension:
        return "even"
    return "boundary" if allow_boundary else None

class QRuelleSystem:
    """ The deformed Ruelle equation as a square system in x = (phi[1:], c).

    Provides residual(x) and jacobian(x) for toolkit.optimise.NewtonOptimiser.

    Args:
        A2 (ndarray): (d, d^k) table A2[a, x] = A(a x).
        q_tilde (float, QParam): index of the deformed exponential.
        extension (str, optional): domain extension of exp_q. Defaults to None.
    """

    def __init__(self, A2, q_tilde, extension=None):
        self.A2 = np.asarray(A2, dtype=float)
        self.q = as_qparam(q_tilde)
        self.extension = extension
        self.d, self.n = self.A2.shape
        self.k = int(round(math.log(self.n) / math.log(self.d)))
        self.pre = pre_index(self.d, self.k)
        self.rows = np.broadcast_to(np.arange(self.n)[None, :], self.pre.shape)

    @classmethod
    def from_potential(cls, A, q_tilde, extension=None):
        assertion(A.memory > MAX_MEMORY, DomainError("memory {0} exceeds the solver guard {1}".format(A.memory, MAX_MEMORY)))
        k, A2 = split_table(A)
        assertion(A.d ** k > MAX_CONTEXTS, DomainError("{0} contexts exceed the solver guard {1}".format(A.d ** k, MAX_CONTEXTS)))
        return cls(A2, q_tilde, extension)

    def scaled(self, t):
        return QRuelleSystem(t * self.A2, self.q, self.extension)

    def perturbed(self, delta):
        return QRuelleSystem(self.A2 + delta, self.q, self.extension)

    def unpack(self, x):
        return np.concatenate(([0.], x[:-1])), float(x[-1])

    @staticmethod
    def pack(phi, c):
        phi = np.asarray(phi, dtype=float)
        return np.append(phi[1:] - phi[0], c)

    def arguments(self, phi, c):
        return self.A2 + phi[self.pre] - phi[None, :] - c

    def defect(self, phi, c):
        return exp_q(self.arguments(phi, c), self.q, extension=self.extension).sum(axis=0) - 1.

    def residual(self, x):
        return self.defect(*self.unpack(x))

    def jacobian(self, x):
        W = dexp_q(self.arguments(*self.unpack(x)), self.q, extension=self.extension)
        n = self.n
        jac = np.zeros((n, n + 1))
        np.add.at(jac, (self.rows.ravel(), self.pre.ravel()), W.ravel())
        total = W.sum(axis=0)
        jac[np.arange(n), np.arange(n)] -= total
        jac[:, n] = -total
        return jac[:, 1:]

    def bases(self, phi, c):
        if self.q.classical:
            return np.ones_like(self.A2)
        return 1. + (1. - self.q.q) * self.arguments(phi, c)

    def trivial(self):
        """ phi = 0 and c = log_{2-q~}(d), the root for A = 0. """
        return self.pack(np.zeros(self.n), log_q(float(self.d), 2. - self.q.q))

def qruelle_residual(A, q_tilde, phi, c, extension=None):
    """ Per-context defect sum_a e_{q~}^{A(a x) + phi(a x) - phi(x) - c} - 1.

    Args:
        A (Potential): potential of memory m.
        q_tilde (float, QParam): index of the deformed exponential.
        phi (ndarray): table over contexts of length k = max(m - 1, 1).
        c (float): constant.

    Raises:
        QExpDomain: a summand is outside the domain; location is (a, context).
    """
    system = QRuelleSystem.from_potential(A, q_tilde, extension)
    phi = np.asarray(phi, dtype=float)
    assertion(phi.shape != (system.n,), DomainError("phi must have {0} entries".format(system.n)))
    return system.defect(phi, c)

def _newton(system, x0, accept_tol):
    result = NewtonOptimiser(system, tol=NEWTON_TOL)(x0)
    if result.residual <= accept_tol:
        return result.x
    return None

def _continuation(system, steps, min_step, accept_tol):
    """ Track the root of the system scaled by t from t = 0 to t = 1.

    Returns:
        tuple: (x, None) on success, (None, t) with the failing t on breakdown.
    """
    x = system.trivial()
    t, h, h_max = 0., 1. / steps, 1. / steps
    while t < 1.:
        t_next = min(1., t + h)
        x_next = _newton(system.scaled(t_next), x, accept_tol)
        if x_next is None:
            h /= 2.
            if h < min_step:
                logger.warning("continuation broke down at t = %.6g", t_next)
                return None, t_next
            continue
        x, t = x_next, t_next
        h = min(2. * h, h_max)
    return x, None

def _lattice(system, phi_grid, c_offsets, max_starts, seed):
    n = system.n
    c0 = system.trivial()[-1] + float(system.A2.mean())
    total = len(phi_grid) ** (n - 1) * len(c_offsets)
    if total <= max_starts:
        return [np.array(phi + (c0 + dc,)) for phi in itertools.product(phi_grid, repeat=n - 1) for dc in c_offsets]
    rng = np.random.default_rng(seed)
    phi = np.asarray(phi_grid)[rng.integers(0, len(phi_grid), size=(max_starts, n - 1))]
    c = c0 + np.asarray(c_offsets)[rng.integers(0, len(c_offsets), size=max_starts)]
    starts = np.unique(np.column_stack([phi, c]), axis=0)
    logger.debug("lattice of %d starts sampled from %d", len(starts), total)
    return list(starts)

def _result(system, x, margin):
    phi, c = system.unpack(x)
    residual = float(np.max(np.abs(system.defect(phi, c))))
    bases = system.bases(phi, c)
    if system.extension == "even":
        positive = bool(np.all(np.abs(bases) > margin))
    else:
        positive = bool(np.all(bases > margin))
    jacobian = None
    if positive:
        values = exp_q(system.arguments(phi, c), system.q, extension=system.extension)
        jacobian = Potential(system.d, system.k + 1, values.ravel())
    boundary = bool(np.any(np.abs(bases) <= margin))
    return SolveResult(phi, c, residual, positive, jacobian, None, boundary)

def _deduplicate(roots, tol):
    roots = sorted(roots, key=lambda x: (-x[-1], tuple(x[:-1])))
    kept = []
    for x in roots:
        if all(np.max(np.abs(x - y)) >= tol for y in kept):
            kept.append(x)
    return kept

def qruelle_solve(A, q_tilde, homotopy_steps=HOMOTOPY_STEPS, min_step=MIN_STEP, phi_grid=PHI_GRID,
                  c_offsets=C_OFFSETS, max_starts=MAX_STARTS, seed=0, dedup_tol=DEDUP_TOL,
                  accept_tol=RESIDUAL_TOL, allow_boundary=False, even_extension=False,
                  initial_guesses=(), threads=None):
    """ All roots (phi, c) of the deformed Ruelle equation that the search finds.

    Starting points: the end of a homotopy continuation along t A from the trivial root
    (skipped when homotopy_steps = 0), the given initial guesses (phi table, c) and a lattice
    of phi values crossed with c offsets around log_{2-q~}(d) + mean(A), sampled down to
    max_starts. Roots closer than dedup_tol are merged.

    Args:
        A (Potential): potential of memory m <= 4.
        q_tilde (float, QParam): index of the deformed exponential.
        allow_boundary (bool, optional): admit vanishing summands (marked boundary). Defaults to False.
        even_extension (bool, optional): continue even powers to negative bases. Defaults to False.
        threads (int, optional): worker threads for the multistart. Defaults to QTHERMO_THREADS.

    Returns:
        BranchList: SolveResults sorted by c descending, then phi. May be empty.
    """
    system = QRuelleSystem.from_potential(A, q_tilde, _extension(even_extension, allow_boundary))
    starts, failed_t = [], None
    if homotopy_steps > 0:
        x, failed_t = _continuation(system, homotopy_steps, min_step, accept_tol)
        if x is not None:
            starts.append(x)
    starts.extend(QRuelleSystem.pack(phi, c) for phi, c in initial_guesses)
    if max_starts > 0:
        starts.extend(_lattice(system, phi_grid, c_offsets, max_starts, seed))
    logger.debug("solving from %d starting points", len(starts))
    roots = config.parallel_map(lambda x0: _newton(system, x0, accept_tol), starts, max_workers=threads)
    roots = _deduplicate([x for x in roots if x is not None], dedup_tol)
    results = [_result(system, x, POSITIVE_MARGIN)._replace(branch_id=i) for i, x in enumerate(roots)]
    return BranchList(results, continuation_t=failed_t)

def branch_measure(branch):
    """ The equilibrium state of log J for a branch with a Jacobian. """
    assertion(branch.jacobian is None, DomainError("branch {0} has no Jacobian".format(branch.branch_id)))
    J = branch.jacobian
    return equilibrium_markov(Potential(J.d, J.memory, np.log(J.values)))

def objective_at_branch(A, q, branch):
    """ H_q(mu_J) + int A dmu_J for the Jacobian J of a branch. """
    mu = branch_measure(branch)
    return q_entropy_markov(mu, q) + mu.integrate(A)

def bowen_potential(J, q):
    """ -log_q(1/J) as a potential; its deformed Ruelle equation at 2 - q has the root phi = 0, c = 0. """
    return Potential(J.d, J.memory, -log_q(1. / J.values, q))

def q_equilibrium(A, q, **opts):
    """ q-pressure and q-equilibrium state of A from a strictly positive solution branch.

    Among positive branches the one with the largest H_q(mu_J) + int A dmu_J is selected
    (ties by branch_id). The Bowen relation P_q(-log_q(1/J)) = 0 is re-solved and its
    constant returned as bowen_c.

    Raises:
        NoPositiveBranch: no branch has strictly positive summands.
    """
    q = as_qparam(q)
    branches = qruelle_solve(A, q.dual(), **opts)
    positive = [b for b in branches if b.summands_positive]
    if not positive:
        raise NoPositiveBranch("no strictly positive branch among {0} found (q={1})".format(len(branches), q.q),
                               best=list(branches))
    scored = [(objective_at_branch(A, q, b), -b.branch_id, b) for b in positive]
    _, _, branch = max(scored, key=lambda s: s[:2])
    mu = branch_measure(branch)
    B = bowen_potential(branch.jacobian, q)
    n = B.d ** (B.memory - 1)
    check = qruelle_solve(B, q.dual(), homotopy_steps=0, max_starts=0, initial_guesses=[(np.zeros(n), 0.)],
                          even_extension=opts.get('even_extension', False))
    bowen_c = min((b.c for b in check), key=abs, default=float('nan'))
    if not abs(bowen_c) <= BOWEN_TOL:
        logger.warning("Bowen relation: re-solve of -log_q(1/J) gave c = %.3e", bowen_c)
    return QEquilibrium(branch.c, mu, branch, bowen_c)

# ---------------------------------------------------------------- closed forms

def jana_closed_form(a12, a21):
    """ The printed two-step closed form at q~ = 1/2 with a11 = a22 = 0.

    Returns:
        list: two (phi2, c) pairs. They satisfy the equation of the first context only.
    """
    disc = 16. - a12 ** 2 + 2. * a12 * a21 - a21 ** 2
    assertion(disc < 0., DomainError("negative discriminant 16 - (a12 - a21)^2 = {0:.6g}".format(disc)))
    c = 0.5 * (4. + math.sqrt(disc))
    inner = 4. * c - c ** 2
    assertion(inner < 0., DomainError("negative discriminant 4c - c^2 = {0:.6g}".format(inner)))
    r = math.sqrt(inner)
    base = -2. - a21 + c
    return [(base + r, c), (base - r, c)]

def jana_roots(a12, a21):
    """ Exact roots at q~ = 1/2, a11 = a22 = 0 on the even continuation, c descending.

    phi2 = (a12 - a21)/2 and c = 2 + (S +- sqrt(32 - S^2))/4 with S = a12 + a21.
    """
    S = a12 + a21
    disc = 32. - S ** 2
    assertion(disc < 0., DomainError("no root: 32 - (a12 + a21)^2 = {0:.6g}".format(disc)))
    phi2 = 0.5 * (a12 - a21)
    r = math.sqrt(disc)
    return [(phi2, 2. + (S + r) / 4.), (phi2, 2. + (S - r) / 4.)]

def jana_potential(a12, a21, a11=0., a22=0.):
    return Potential.from_named({"11": a11, "12": a12, "21": a21, "22": a22})

def supex_closed_form(a1, a2, b1=0., b2=0., s=0.):
    """ (phi2, c) for the memory-one potential A + sB at q~ = 1/2 on the even continuation.

    phi is phi2 on the cylinder of 1 and 0 on the cylinder of 2; c(s) = (4 + a1 + a2 + (b1 + b2)s)/2.
    """
    x1, x2 = a1 + b1 * s, a2 + b2 * s
    disc = 16. - (x1 - x2) ** 2
    assertion(disc < 0., DomainError("negative square-root argument {0:.6g}".format(disc)))
    return 0.5 * (x2 - x1 + math.sqrt(disc)), 0.5 * (4. + x1 + x2)

def supex_phi_table(phi2):
    """ The eigenfunction (phi2, 0) in the gauge phi(1) = 0. """
    return np.array([0., -phi2])

def explimeq_family(q_tilde, q1, q2):
    """ A two-step potential (a11 = a21 = 0) with an explicit root, from summand values q1, q2 in (0, 1).

    Returns:
        ExplimeqFamily: (a12, a22, phi2, c).
    """
    assertion(not (0. < q1 < 1. and 0. < q2 < 1.), DomainError("q1 and q2 must lie in (0, 1)"))
    c = -log_q(q1, q_tilde)
    phi2 = log_q(1. - q1, q_tilde) + c
    a12 = log_q(1. - q2, q_tilde) + phi2 + c
    a22 = log_q(q2, q_tilde) + c
    return ExplimeqFamily(a12, a22, phi2, c)

def explimeq_potential(a12, a22):
    return Potential.from_named({"11": 0., "12": a12, "21": 0., "22": a22})

# ---------------------------------------------------------------- classical bridge

def a_q_transform(A, q):
    """ A_q = log(e_q^A) = log(1 + (1-q)A)/(1-q), entrywise.

    Raises:
        DomainError: some entry has 1 + (1-q)A <= 0.
    """
    q = as_qparam(q)
    if q.classical:
        return A
    base = 1. + (1. - q.q) * A.values
    assertion(np.any(base <= 0.), DomainError("A_q undefined: 1 + (1-q)A <= 0 at index {0}".format(int(np.argmin(base)))))
    return Potential(A.d, A.memory, np.log1p((1. - q.q) * A.values) / (1. - q.q))

def bridge_half_g(a, a1, a2, C):
    """ g with e_{3/2}^{g + (a1 - a2 - C)} = e_{1/2}^a e^{a1 - a2 - C}, for 2 + a > 0. """
    a = np.asarray(a, dtype=float)
    assertion(np.any(2. + a <= 0.), DomainError("requires 2 + a > 0"))
    delta = np.asarray(a1 - a2 - C, dtype=float)
    root = np.exp(0.5 * delta)
    g = (-4. + (2. + a) * root * (2. - delta)) / ((2. + a) * root)
    return float(g) if g.ndim == 0 else g

def bridge_half(A):
    """ A potential B with an explicit solution of the deformed equation at q~ = 3/2.

    From the classical eigendata (h, lambda) of A_{1/2}: phi_B = log h (gauged), c_B = log lambda
    and B(a x) = g(phi_B(a x), phi_B(x), c_B, A(a x)).

    Returns:
        tuple: (B, phi_B, c_B), B of memory k + 1.
    """
    Aq = a_q_transform(A, 0.5)
    k, A2 = split_table(A)
    lam, h, _ = leading_eig(TransferMatrix(Aq))
    phi = np.log(h) - np.log(h[0])
    c = math.log(lam)
    B2 = bridge_half_g(A2, phi[pre_index(A.d, k)], phi[None, :], c)
    B = Potential(A.d, k + 1, B2.ravel())
    defect = float(np.max(np.abs(qruelle_residual(B, 1.5, phi, c))))
    if defect > 1e-9:
        logger.warning("bridge residual %.3e", defect)
    return B, phi, c

def bridge_general_g(a, a1, a2, C, q):
    """ g with e_{2-q}^{g + (a1 - a2 - C)} = e_q^a e^{a1 - a2 - C}.

    The closed inverse log_{2-q} is polished by Newton steps on log e_{2-q}.

    Raises:
        DomainError: e_q^a is undefined.
    """
    q = as_qparam(q)
    qt = q.dual()
    delta = a1 - a2 - C
    target = math.log(exp_q(a, q)) + delta
    assertion(not math.isfinite(target), DomainError("right-hand side outside the range of e_(2-q)"))
    y = log_q(math.exp(target), qt)
    for _ in range(3):
        f = math.log(exp_q(y, qt)) - target
        if abs(f) <= 1e-15:
            break
        y -= f * exp_q(y, qt) / dexp_q(y, qt)
    return y - delta

# ---------------------------------------------------------------- derivatives

def _select(branches, branch_id):
    assertion(not branches, ConvergenceError("no solution branch at s = 0"))
    if branch_id is not None:
        found = [b for b in branches if b.branch_id == branch_id]
        assertion(not found, DomainError("no branch {0}".format(branch_id)))
        return found[0]
    positive = [b for b in branches if b.summands_positive]
    return positive[0] if positive else branches[0]

def pressure_derivative(A, B, q, h_step=H_STEP, branch_id=None, **opts):
    """ d/ds c(A + sB) at s = 0 along one solution branch.

    The branch at s = 0 is tracked to s = +-h and +-h/2 by Newton steps from the s = 0 root and
    the central differences are combined by Richardson extrapolation. When the branch has a
    Jacobian J the derivative is compared with

        int w (v + phi' - phi' o sigma) dmu / int w dmu,  w = e_{q~}'(u)/J,

    mu the equilibrium state of log J (w = J^(1-q) in the strict domain).

    Returns:
        PressureDerivative: dPds, and the two sides and defect of the identity (None without J).
    """
    q = as_qparam(q)
    m = max(A.memory, B.memory)
    A, B = A.lift(m), B.lift(m)
    accept_tol = opts.get('accept_tol', RESIDUAL_TOL)
    branch = _select(qruelle_solve(A, q.dual(), **opts), branch_id)
    system = QRuelleSystem.from_potential(A, q.dual(), _extension(opts.get('even_extension', False), opts.get('allow_boundary', False)))
    _, V = split_table(B)
    x0 = QRuelleSystem.pack(branch.phi, branch.c)

    def track(s):
        x = _newton(system.perturbed(s * V), x0, accept_tol)
        if x is None:
            raise ConvergenceError("branch {0} lost at s = {1:.3g}".format(branch.branch_id, s), best=branch)
        return x

    def central(h):
        return (track(h) - track(-h)) / (2. * h)

    dx = (4. * central(h_step / 2.) - central(h_step)) / 3.
    dPds = float(dx[-1])
    if branch.jacobian is None:
        return PressureDerivative(dPds, None, None, None)
    dphi = np.concatenate(([0.], dx[:-1]))
    u = system.arguments(branch.phi, branch.c)
    J = exp_q(u, system.q, extension=system.extension)
    w = dexp_q(u, system.q, extension=system.extension) / J
    mass = branch_measure(branch).masses(system.k + 1).reshape(system.d, system.n)
    integrand = V + dphi[system.pre] - dphi[None, :]
    rhs = float(np.sum(mass * w * integrand) / np.sum(mass * w))
    return PressureDerivative(dPds, dPds, rhs, abs(dPds - rhs))
