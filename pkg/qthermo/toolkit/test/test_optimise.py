import math
import unittest

import numpy as np

from qthermo.toolkit.optimise import NewtonOptimiser
from qthermo.errors import DomainError


class Square:
    """ x^2 - 2 = 0 on x > 0. """

    def residual(self, x):
        if x[0] <= 0.:
            raise DomainError("x must be positive")
        return np.array([x[0] ** 2 - 2.])

    def jacobian(self, x):
        return np.array([[2. * x[0]]])


class Circle:
    """ Intersection of the unit circle with the line x = y. """

    def residual(self, x):
        return np.array([x[0] ** 2 + x[1] ** 2 - 1., x[0] - x[1]])

    def jacobian(self, x):
        return np.array([[2. * x[0], 2. * x[1]], [1., -1.]])


class NoRoot:

    def residual(self, x):
        return np.array([x[0] ** 2 + 1.])

    def jacobian(self, x):
        return np.array([[2. * x[0]]])


class TestNewton(unittest.TestCase):

    def test_scalar(self):
        result = NewtonOptimiser(Square())([1.])
        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.x[0], math.sqrt(2.), places=12)
        self.assertLessEqual(result.residual, 1e-12)

    def test_damped(self):
        optimiser = NewtonOptimiser(Square())
        result = optimiser([0.1])
        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.x[0], math.sqrt(2.), places=12)
        self.assertEqual(len(optimiser.record['residual']), result.iterations + 1)
        self.assertLess(min(optimiser.record['damping']), 1.)

    def test_system(self):
        result = NewtonOptimiser(Circle())([1., 0.5])
        self.assertTrue(result.converged)
        np.testing.assert_allclose(result.x, [math.sqrt(0.5)] * 2, atol=1e-12)

    def test_no_root(self):
        result = NewtonOptimiser(NoRoot(), max_iter=20)([0.5])
        self.assertFalse(result.converged)
        self.assertGreaterEqual(result.residual, 1.)

    def test_outside_domain(self):
        result = NewtonOptimiser(Square())([-1.])
        self.assertFalse(result.converged)
        self.assertEqual(result.iterations, 0)


if __name__ == "__main__":
    unittest.main()
