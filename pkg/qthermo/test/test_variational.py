import math
import unittest

import numpy as np

import qthermo.variational as V
from qthermo.shift import Potential, coboundary
from qthermo.qfun import log_q
from qthermo.ruelle import MarkovMeasure, q_entropy_markov, ks_entropy, classical_pressure
from qthermo.errors import DomainError


def random_jacobian(rng, d=2, n=2):
    return rng.dirichlet(np.ones(d), n).T


class TestGrid(unittest.TestCase):

    def test_points(self):
        grid = V.markov_grid(2, 1, 4)
        self.assertEqual(len(grid), 25)
        t = grid.points(0, len(grid))
        np.testing.assert_allclose(t[0], [V.EPS, V.EPS])
        np.testing.assert_allclose(t[1], [V.EPS, 0.25])
        np.testing.assert_allclose(t[12], [0.5, 0.5])
        np.testing.assert_allclose(grid.points(7, 9), t[7:9])

    def test_guard(self):
        with self.assertRaises(DomainError):
            V.markov_grid(3, 1, 10)
        with self.assertRaises(DomainError):
            V.markov_grid(2, 3, 2)
        with self.assertRaises(DomainError):
            V.markov_grid(2, 2, 400)

    def test_batch_matches_measure(self):
        rng = np.random.default_rng(0)
        for k in (1, 2):
            grid = V.markov_grid(2, k, 2)
            t = rng.uniform(0.1, 0.9, size=(5, 2 ** k))
            masses, pi = V.batch_masses(t, 2, k)
            for q in (0.5, 1., 1.5):
                H = V.batch_q_entropy(masses, pi, 2, k, q)
                for i in range(5):
                    mu = grid.measure(t[i])
                    np.testing.assert_allclose(masses[i], mu.masses(k + 1), atol=1e-12)
                    np.testing.assert_allclose(pi[i], mu.pi, atol=1e-12)
                    self.assertAlmostEqual(H[i], q_entropy_markov(mu, q), places=12)
            np.testing.assert_allclose(masses.sum(axis=1), 1., atol=1e-12)


class TestScan(unittest.TestCase):

    def test_zero_potential(self):
        result = V.q_pressure_scan(Potential.constant(2, 0., memory=2), 0.5, grid_n=40)
        self.assertAlmostEqual(result.value, log_q(2., 0.5), delta=1e-6)
        self.assertAlmostEqual(result.value, 0.828427, places=6)
        np.testing.assert_allclose(result.argmax.transition_table(), 0.5, atol=1e-3)
        self.assertEqual(result.grid_n, 40)

    def test_reevaluation(self):
        rng = np.random.default_rng(1)
        A = Potential(2, 2, rng.uniform(-1., 1., 4))
        result = V.q_pressure_scan(A, 0.7, grid_n=50)
        mu = result.argmax
        self.assertAlmostEqual(result.value, q_entropy_markov(mu, 0.7) + mu.integrate(A), places=12)

    def test_no_refine(self):
        A = Potential(2, 1, [0., 1.])
        coarse = V.q_pressure_scan(A, 0.6, grid_n=10, refine=False)
        fine = V.q_pressure_scan(A, 0.6, grid_n=10)
        self.assertFalse(coarse.refined)
        self.assertGreaterEqual(fine.value, coarse.value - 1e-12)

    def test_classical(self):
        rng = np.random.default_rng(2)
        for memory in (1, 2):
            A = Potential(2, memory, rng.normal(size=2 ** memory))
            result = V.q_pressure_scan(A, 1., grid_n=60)
            self.assertAlmostEqual(result.value, classical_pressure(A), delta=1e-6)

    def test_memory_three(self):
        rng = np.random.default_rng(3)
        A = Potential(2, 3, rng.normal(size=8))
        result = V.q_pressure_scan(A, 1., grid_n=12)
        self.assertEqual(result.argmax.k, 2)
        self.assertAlmostEqual(result.value, classical_pressure(A), delta=1e-4)

    def test_bowen(self):
        rng = np.random.default_rng(4)
        for q in (0.5, 1.5):
            J = random_jacobian(rng)
            A = Potential(2, 2, -log_q(1. / J.ravel(), q))
            self.assertGreaterEqual(V.q_pressure_scan(A, q, grid_n=100).value, -1e-3)
            self.assertGreaterEqual(V.q_pressure_scan(A + 0.3, q, grid_n=100).value, 0.3 - 1e-3)

    def test_crosscheck(self):
        rng = np.random.default_rng(3)
        for q in (0.5, 0.8, 1.3):
            A = Potential(2, 2, rng.uniform(-0.3, 0.3, 4))
            check = V.scan_crosscheck(A, q, grid_n=100)
            self.assertIsNotNone(check.c)
            self.assertGreaterEqual(check.defect, -1e-3)

    def test_translation(self):
        rng = np.random.default_rng(5)
        A = Potential(2, 2, rng.uniform(-1., 1., 4))
        base = V.q_pressure_scan(A, 0.6, grid_n=60).value
        self.assertAlmostEqual(V.q_pressure_scan(A + 1.25, 0.6, grid_n=60).value, base + 1.25, delta=1e-6)

    def test_coboundary(self):
        rng = np.random.default_rng(6)
        A = Potential(2, 2, rng.uniform(-1., 1., 4))
        base = V.q_pressure_scan(A, 1.4, grid_n=60).value
        for _ in range(3):
            f = Potential(2, 1, rng.normal(size=2))
            self.assertAlmostEqual(V.q_pressure_scan(A + coboundary(f), 1.4, grid_n=60).value, base, delta=1e-3)

    def test_monotone(self):
        rng = np.random.default_rng(7)
        for q in (0.5, 1.5):
            A = Potential(2, 2, rng.uniform(-1., 1., 4))
            B = A + Potential(2, 2, rng.uniform(0., 0.5, 4))
            self.assertLessEqual(V.q_pressure_scan(A, q, grid_n=60).value, V.q_pressure_scan(B, q, grid_n=60).value + 1e-6)

    def test_threads(self):
        A = Potential(2, 2, [0.1, -0.4, 0.3, 0.2])
        one = V.q_pressure_scan(A, 0.5, grid_n=400, refine=False, threads=1)
        many = V.q_pressure_scan(A, 0.5, grid_n=400, refine=False, threads=4)
        self.assertEqual(one.value, many.value)
        np.testing.assert_array_equal(one.argmax.transition_table(), many.argmax.transition_table())


class TestSurface(unittest.TestCase):

    def test_maximum(self):
        for q in (0.5, 0.9):
            surface = V.entropy_surface(q, grid_n=200)
            self.assertEqual(list(surface.columns), ['P12', 'P21', 'H_q'])
            self.assertEqual(len(surface), 201 ** 2)
            best = surface.loc[surface['H_q'].idxmax()]
            self.assertAlmostEqual(best['P12'], 0.5, places=12)
            self.assertAlmostEqual(best['P21'], 0.5, places=12)
            self.assertAlmostEqual(best['H_q'], log_q(2., q), delta=1e-6)

    def test_classical(self):
        surface = V.entropy_surface(1., grid_n=20)
        rng = np.random.default_rng(8)
        for i in rng.integers(len(surface), size=20):
            row = surface.iloc[i]
            P = np.array([[1. - row['P12'], row['P12']], [row['P21'], 1. - row['P21']]])
            self.assertAlmostEqual(row['H_q'], ks_entropy(MarkovMeasure.from_transitions(P)), delta=1e-9)

    def test_concavity(self):
        report = V.surface_concavity(0.9, segments=1000)
        self.assertTrue(report['diagonal']['passed'])
        self.assertIn('violations', report['general'])


class TestAffinity(unittest.TestCase):

    def test_equal(self):
        mu = MarkovMeasure.from_transitions(np.array([[0.7, 0.3], [0.4, 0.6]]))
        self.assertAlmostEqual(V.entropy_affinity_defect(mu, mu, 0.3, 0.6), 0., delta=1e-6)

    def test_floor(self):
        report = V.entropy_affinity_report(0.6, samples=10)
        self.assertEqual(report['below_floor'], 0)
        self.assertEqual(report['defects']['count'] + report['failures'], 10)
        self.assertGreaterEqual(report['defects']['min'], -1e-6)

    def test_lam(self):
        mu = MarkovMeasure.bernoulli([0.5, 0.5])
        with self.assertRaises(DomainError):
            V.entropy_affinity_defect(mu, mu, 1.5, 0.6)


if __name__ == '__main__':
    unittest.main()
