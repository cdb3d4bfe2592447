import math
import unittest

import numpy as np

import qthermo.staticq as S
from qthermo.qfun import log_q
from qthermo.errors import DomainError, QExpDomain

FIRDU = dict(a=(0.5, 0.8), beta=1.2, q=1. / 3.)


class TestEntropy(unittest.TestCase):

    def test_prob_vector(self):
        np.testing.assert_array_equal(S.as_prob_vector([0.25, 0.75]), [0.25, 0.75])
        for p in ([0.5, 0.6], [1.5, -0.5], [], [float('nan'), 1.]):
            with self.assertRaises(DomainError):
                S.as_prob_vector(p)

    def test_values(self):
        self.assertEqual(S.q_entropy_vec([1., 0., 0.], 0.5), 0.)
        self.assertAlmostEqual(S.q_entropy_vec([0.5, 0.5], 0.5), 0.8284271247461903, places=14)
        self.assertAlmostEqual(S.q_entropy_vec([0.5, 0.5], 1.), math.log(2.), places=15)
        p = np.array([0.2, 0.3, 0.5])
        for q in (0.4, 1.3):
            self.assertAlmostEqual(S.q_entropy_vec(p, q), (np.sum(p ** q) - 1.) / (1. - q), places=14)

    def test_non_extensive(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            r, s = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(2))
            q = rng.uniform(0.2, 1.8)
            Hr, Hs = S.q_entropy_vec(r, q), S.q_entropy_vec(s, q)
            self.assertAlmostEqual(S.q_entropy_vec(np.outer(r, s).ravel(), q), Hr + Hs + (1. - q) * Hr * Hs, places=12)

    def test_maximum(self):
        rng = np.random.default_rng(1)
        for q in (0.3, 0.8, 1., 1.6):
            bound = log_q(4., q)
            for p in rng.dirichlet(np.ones(4), 2500):
                self.assertLessEqual(S.q_entropy_vec(p, q), bound + 1e-12)
            self.assertAlmostEqual(S.q_entropy_vec(np.full(4, 0.25), q), bound, places=13)

    def test_shannon_ordering(self):
        rng = np.random.default_rng(2)
        for p in rng.dirichlet(np.ones(5), 500):
            h = S.shannon_entropy(p)
            self.assertGreaterEqual(S.q_entropy_vec(p, rng.uniform(0.1, 1.)), h - 1e-12)
            self.assertLessEqual(S.q_entropy_vec(p, rng.uniform(1., 1.9)), h + 1e-12)

    def test_concave(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            q = rng.uniform(0.1, 2.5)
            r, s = rng.dirichlet(np.ones(4), 2)
            mid = S.q_entropy_vec(0.5 * (r + s), q)
            self.assertGreaterEqual(mid, 0.5 * (S.q_entropy_vec(r, q) + S.q_entropy_vec(s, q)) - 1e-12)

    def test_renyi(self):
        for q in (0.3, 0.7, 1.5):
            self.assertAlmostEqual(S.renyi_entropy(np.full(3, 1. / 3.), q), math.log(3.), places=13)
        self.assertEqual(S.renyi_entropy([1., 0.], 0.5), 0.)
        rng = np.random.default_rng(4)
        for p in rng.dirichlet(np.ones(3), 50):
            q = rng.uniform(0.2, 1.8)
            F = math.log1p((1. - q) * S.q_entropy_vec(p, q)) / (1. - q)
            self.assertAlmostEqual(S.renyi_entropy(p, q), F, places=12)


class TestStaticPressure(unittest.TestCase):

    def test_firdu_closed_form(self):
        eq = S.static_q_pressure(**FIRDU)
        self.assertAlmostEqual(eq.pressure, 1.6895, delta=5e-4)
        self.assertAlmostEqual(eq.p_star[0], 0.3172, delta=5e-4)
        self.assertAlmostEqual(eq.p_star[1], 0.6828, delta=5e-4)
        self.assertAlmostEqual(eq.objective_at_p, S.objective(eq.p_star, FIRDU['a'], FIRDU['beta'], FIRDU['q']), places=12)

    def test_firdu_stationary(self):
        closed = S.static_q_pressure(**FIRDU)
        eq = S.static_q_pressure_stationary(**FIRDU)
        self.assertAlmostEqual(eq.pressure, 1.69055, delta=1e-4)
        self.assertAlmostEqual(eq.p_star[0], 0.3426, delta=1e-3)
        self.assertGreater(eq.pressure, closed.pressure + 5e-4)
        self.assertLess(S.stationarity_defect(eq.p_star, FIRDU['a'], FIRDU['beta'], FIRDU['q']), 1e-8)
        self.assertGreater(S.stationarity_defect(closed.p_star, FIRDU['a'], FIRDU['beta'], FIRDU['q']), 1e-3)

    def test_beta_zero(self):
        for q in (0.5, 1., 1.5):
            for method in (S.static_q_pressure, S.static_q_pressure_stationary):
                eq = method([0.3, -1., 2.], 0., q)
                np.testing.assert_allclose(eq.p_star, np.full(3, 1. / 3.), atol=1e-12)
                self.assertAlmostEqual(eq.pressure, log_q(3., q), places=11)
            eq = S.static_q_pressure_scan([0.3, -1.], 0., q, grid_n=200)
            np.testing.assert_allclose(eq.p_star, [0.5, 0.5], atol=1e-6)

    def test_classical(self):
        a = np.array([0.2, -0.4, 1.1])
        expected = math.log(np.sum(np.exp(0.7 * a)))
        self.assertAlmostEqual(S.static_q_pressure(a, 0.7, 1.).pressure, expected, places=12)
        self.assertAlmostEqual(S.static_q_pressure_stationary(a, 0.7, 1.).pressure, expected, places=12)

    def test_stationary_random(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            d = int(rng.integers(2, 5))
            a, beta, q = rng.uniform(-1, 1, d), rng.uniform(-3, 3), rng.uniform(0.2, 1.9)
            eq = S.static_q_pressure_stationary(a, beta, q)
            self.assertLess(S.stationarity_defect(eq.p_star, a, beta, q), 1e-8)
            for p in rng.dirichlet(np.ones(d), 20):
                self.assertLessEqual(S.objective(p, a, beta, q), eq.pressure + 1e-12)

    def test_domain(self):
        # e_{3/2}(x) = (1 - x/2)^-2 needs beta a_j < 2
        with self.assertRaises(QExpDomain):
            S.static_q_pressure([3., 7.], 0.5, 0.5)
        self.assertGreater(S.static_q_pressure([3., 7.], 0.5, 0.5, extension="even").pressure, 0.)

    def test_loloi(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            a, beta = rng.uniform(-2, 2, 2), rng.uniform(-0.9, 0.9)
            eq = S.static_q_pressure(a, beta, 0.5)
            self.assertAlmostEqual(eq.p_star[0], S.loloi_p1(a, beta), places=12)
            a1, a2 = a
            b = beta
            expanded = (2. - a2 * b) ** 2 / (8. - 4. * a1 * b - 4. * a2 * b + a1 ** 2 * b ** 2 + a2 ** 2 * b ** 2)
            self.assertAlmostEqual(S.loloi_p1(a, beta), expanded, places=12)


class TestScan(unittest.TestCase):

    def test_firdu(self):
        scan = S.static_q_pressure_scan(grid_n=2000, **FIRDU)
        closed = S.static_q_pressure(**FIRDU)
        stationary = S.static_q_pressure_stationary(**FIRDU)
        self.assertGreaterEqual(scan.pressure, closed.pressure - 1e-9)
        self.assertLessEqual(abs(scan.pressure - stationary.pressure), 1e-6)

    def test_random_d2(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a, beta, q = rng.uniform(-1, 1, 2), rng.uniform(-2, 2), rng.uniform(0.3, 1.7)
            scan = S.static_q_pressure_scan(a, beta, q, grid_n=2000)
            stationary = S.static_q_pressure_stationary(a, beta, q)
            self.assertLessEqual(abs(scan.pressure - stationary.pressure), 1e-6)

    def test_random_d3(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            a, beta, q = rng.uniform(-1, 1, 3), rng.uniform(-2, 2), rng.uniform(0.5, 1.5)
            scan = S.static_q_pressure_scan(a, beta, q, grid_n=300)
            stationary = S.static_q_pressure_stationary(a, beta, q)
            self.assertLessEqual(abs(scan.pressure - stationary.pressure), 1e-4)

    def test_unsupported(self):
        with self.assertRaises(DomainError):
            S.static_q_pressure_scan([1., 2., 3., 4.], 1., 0.5)


class TestSweep(unittest.TestCase):

    def test_single_step(self):
        curve = S.beta_sweep((0.5, 0.8), 1. / 3., (1.2, 2.), 1)
        self.assertEqual(len(curve), 1)
        self.assertEqual(curve['pressure'][0], S.static_q_pressure(**FIRDU).pressure)

    def test_classical_convex(self):
        curve = S.beta_sweep((3., 7.), 1., (-0.5, 1.5), 200)
        self.assertEqual(list(curve.columns), ['beta', 'pressure'])
        self.assertTrue(np.all(S.second_differences(curve) >= -1e-9))

    def test_not_convex(self):
        curve = S.beta_sweep((3., 7.), 0.5, (-0.5, 1.5), 200, extension="even")
        self.assertFalse(curve['pressure'].isna().any())
        d2 = S.second_differences(curve)
        self.assertTrue(np.any(d2 > 1e-9))
        self.assertTrue(np.any(d2 < -1e-9))

    def test_gaps(self):
        curve = S.beta_sweep((3., 7.), 0.5, (-0.5, 1.5), 200)
        self.assertTrue(curve['pressure'].isna().any())
        self.assertFalse(curve['pressure'][curve['beta'] < 0.28].isna().any())

    def test_stationary_method(self):
        curve = S.beta_sweep((3., 7.), 0.5, (-0.5, 1.5), 50, method="stationary", threads=2)
        self.assertFalse(curve['pressure'].isna().any())
        self.assertEqual(curve['beta'].tolist(), sorted(curve['beta'].tolist()))
        with self.assertRaises(DomainError):
            S.beta_sweep((3., 7.), 0.5, (0., 1.), 10, method="other")


class TestBernoulli(unittest.TestCase):

    def test_meson_vericat(self):
        self.assertAlmostEqual(S.meson_vericat_bernoulli([0.5, 0.5], 0.5), 0.5 * math.log(2.), places=14)
        self.assertEqual(S.meson_vericat_bernoulli([1., 0.], 0.5), 0.)
        rng = np.random.default_rng(9)
        for p in rng.dirichlet(np.ones(3), 20):
            q = rng.uniform(0.1, 0.9)
            value = S.meson_vericat_bernoulli(p, q)
            self.assertAlmostEqual(value, (1. - q) * S.renyi_entropy(p, q), places=12)
            np.testing.assert_allclose(S.meson_vericat_quotients(p, q, 5), value, atol=1e-12)
        with self.assertRaises(DomainError):
            S.meson_vericat_bernoulli([0.5, 0.5], 1.5)

    def test_variational_entropy(self):
        for q in (0.3, 0.7, 1.4):
            self.assertAlmostEqual(S.bernoulli_variational_entropy([0.5, 0.5], q), log_q(2., q), places=13)
        p = [0.7, 0.2, 0.1]
        self.assertAlmostEqual(S.bernoulli_variational_entropy(p, 1. + 1e-9), S.shannon_entropy(p), places=7)
        rng = np.random.default_rng(10)
        for p in rng.dirichlet(np.ones(3), 50):
            q = rng.uniform(0.2, 1.8)
            self.assertLessEqual(S.bernoulli_variational_entropy(p, q), S.q_entropy_vec(p, q) + 1e-12)


if __name__ == "__main__":
    unittest.main()
