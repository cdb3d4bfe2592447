import os
import tempfile
import unittest

import numpy as np

import qthermo.shift as S
from qthermo.errors import DomainError, ParseError


def jana():
    return S.Potential.from_named({"11": 0., "12": 2., "21": 3.5, "22": 0.})


class TestWord(unittest.TestCase):

    def test_word(self):
        w = S.Word([1, 2, 2], 2)
        self.assertEqual(w, (1, 2, 2))
        self.assertEqual(w.d, 2)
        self.assertEqual(str(w + S.Word([1], 2)), "1221")
        self.assertEqual(w.shift(), (2, 2))
        with self.assertRaises(DomainError):
            S.Word([0, 1], 2)
        with self.assertRaises(DomainError):
            S.Word([3], 2)

    def test_parse_word(self):
        self.assertEqual(S.parse_word("1221", 2), (1, 2, 2, 1))
        self.assertEqual(S.parse_word("1,12,3", 12), (1, 12, 3))
        with self.assertRaises(ParseError):
            S.parse_word("1a", 2)

    def test_all_words(self):
        words = S.all_words(2, 3)
        self.assertEqual(words.shape, (8, 3))
        self.assertEqual(words[0].tolist(), [1, 1, 1])
        self.assertEqual(words[1].tolist(), [1, 1, 2])
        self.assertEqual(words[-1].tolist(), [2, 2, 2])
        for i, w in enumerate(S.all_words(3, 2)):
            self.assertEqual(S.word_index(w, 3), i)


class TestPotential(unittest.TestCase):

    def test_eval(self):
        A = jana()
        self.assertEqual(A.d, 2)
        self.assertEqual(A.memory, 2)
        self.assertEqual(A.eval(S.parse_word("1211", 2)), 2.)
        self.assertEqual(A.eval(S.parse_word("21", 2)), 3.5)
        self.assertEqual(A(S.parse_word("122", 2)), A(S.parse_word("121", 2)))
        with self.assertRaises(DomainError):
            A.eval(S.Word([1], 2))

    def test_constant(self):
        A = S.Potential.constant(3, 1.25, memory=2)
        for w in S.all_words(3, 4):
            self.assertEqual(A.eval(tuple(w)), 1.25)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            S.Potential(2, 2, [0., 1., 2.])
        with self.assertRaises(DomainError):
            S.Potential(2, 1, [0., float('nan')])
        with self.assertRaises(DomainError):
            S.Potential(2, 0, [0.])

    def test_lift_and_table(self):
        A = S.Potential(2, 1, [0.5, 0.8])
        L = A.lift(3)
        self.assertEqual(L.memory, 3)
        rng = np.random.default_rng(0)
        for _ in range(20):
            w = tuple(rng.integers(1, 3, 3))
            self.assertEqual(L.eval(w), A.eval(w))
        T = jana().table()
        self.assertEqual(T.shape, (2, 2))
        self.assertEqual(T[0, 1], 2.)
        self.assertEqual(T[1, 0], 3.5)
        self.assertEqual(jana().table(3).shape, (2, 4))

    def test_named(self):
        A = jana()
        self.assertEqual(A.values.tolist(), [0., 2., 3.5, 0.])
        self.assertEqual(S.Potential.from_named(A.to_named()), A)
        with self.assertRaises(ParseError):
            S.Potential.from_named({"11": 0., "1": 1.})
        with self.assertRaises(ParseError):
            S.Potential.from_named({"11": 0., "12": 1., "21": 1.})

    def test_arithmetic(self):
        A = S.Potential(2, 1, [1., 2.])
        B = jana()
        C = A + B
        self.assertEqual(C.memory, 2)
        self.assertEqual(C.values.tolist(), [1., 3., 5.5, 2.])
        self.assertEqual((2 * A).values.tolist(), [2., 4.])
        self.assertEqual((A - 1).values.tolist(), [0., 1.])
        self.assertEqual((1 - A).values.tolist(), [0., -1.])
        self.assertEqual((-A).values.tolist(), [-1., -2.])
        with self.assertRaises(DomainError):
            A + S.Potential(3, 1, [0., 0., 0.])

    def test_coboundary(self):
        rng = np.random.default_rng(1)
        f = S.Potential(3, 2, rng.normal(size=9))
        g = S.coboundary(f)
        self.assertEqual(g.memory, 3)
        for _ in range(50):
            w = tuple(rng.integers(1, 4, 4))
            self.assertAlmostEqual(g.eval(w), f.eval(w[1:]) - f.eval(w), places=14)
        # Birkhoff sums of a coboundary telescope
        w = S.Word(rng.integers(1, 4, 10), 3)
        tail = S.Word([1, 2], 3)
        x = tuple(w) + tuple(tail)
        self.assertAlmostEqual(S.birkhoff_sum(g, w, tail), f.eval(x[10:]) - f.eval(x), places=12)


class TestBirkhoff(unittest.TestCase):

    def test_constant(self):
        A = S.Potential.constant(2, 0.3, memory=2)
        self.assertAlmostEqual(S.birkhoff_sum(A, S.parse_word("12121", 2), S.Word([1], 2)), 1.5, places=14)

    def test_count(self):
        A = S.Potential(2, 1, [0., 1.])
        self.assertEqual(S.birkhoff_sum(A, S.parse_word("12212", 2)), 3.)
        self.assertEqual(S.birkhoff_sum(A, S.parse_word("12212", 2), S.parse_word("222", 2)), 3.)

    def test_two_paths(self):
        rng = np.random.default_rng(2)
        A = S.Potential(3, 3, rng.normal(size=27))
        for _ in range(1000):
            n = int(rng.integers(0, 12))
            w = S.Word(rng.integers(1, 4, n), 3)
            tail = S.Word(rng.integers(1, 4, 2), 3)
            self.assertAlmostEqual(S.birkhoff_sum(A, w, tail), S.birkhoff_sum_naive(A, w, tail), places=12)

    def test_short_tail(self):
        with self.assertRaises(DomainError):
            S.birkhoff_sum(jana(), S.parse_word("12", 2))
        with self.assertRaises(DomainError):
            S.birkhoff_sum_naive(jana(), S.parse_word("12", 2), ())

    def test_birkhoff_table(self):
        rng = np.random.default_rng(3)
        A = S.Potential(2, 2, rng.normal(size=4))
        n = 4
        table = S.birkhoff_table(A, n)
        for i, w in enumerate(S.all_words(2, n + 1)):
            self.assertAlmostEqual(table[i], S.birkhoff_sum(A, tuple(w[:n]), tuple(w[n:])), places=12)


class TestPreimages(unittest.TestCase):

    def test_preimages(self):
        x = S.parse_word("12", 2)
        self.assertEqual(list(S.preimages(x, 0)), [()])
        words = list(S.preimages(x, 3))
        self.assertEqual(len(words), 8)
        self.assertEqual(words, sorted(words))
        for n in range(1, 9):
            words = set(S.preimages(S.Word([1], 3), n)) if n <= 7 else set(S.preimages(S.Word([1], 2), n))
            d = 3 if n <= 7 else 2
            self.assertEqual(len(words), d ** n)
            self.assertEqual(words, {tuple(w) for w in S.all_words(d, n)})

    def test_closed_form(self):
        a = np.array([0.3, -0.2, 0.7])
        A = S.Potential(3, 1, a)
        x = S.Word([2], 3)
        for n in (1, 2, 4):
            total = sum(np.exp(S.birkhoff_sum(A, w, x)) for w in S.preimages(x, n))
            self.assertAlmostEqual(total / np.sum(np.exp(a)) ** n, 1., places=12)


class TestMetric(unittest.TestCase):

    def test_dist(self):
        self.assertEqual(S.dist((1, 2, 1), (1, 2, 1)), 0.)
        self.assertEqual(S.dist((1, 2, 1), (2, 2, 1)), 1.)
        self.assertEqual(S.dist((1, 2, 1), (1, 1, 1)), 0.5)
        self.assertEqual(S.dist((1, 2), (1, 2, 1)), 0.25)

    def test_lipschitz(self):
        rng = np.random.default_rng(4)
        A = S.Potential(2, 3, rng.normal(size=8))
        L = S.lipschitz_bound(A)
        for _ in range(500):
            x = tuple(rng.integers(1, 3, 6))
            k = int(rng.integers(0, 6))
            y = x[:k] + tuple(rng.integers(1, 3, 6 - k))
            dxy = S.dist(x, y)
            self.assertLessEqual(abs(A.eval(x) - A.eval(y)), L * dxy + 1e-12)


class TestJSON(unittest.TestCase):

    def test_values(self):
        A = S.potential_from_json('{"d": 2, "memory": 2, "values": [0, 2, 3.5, 0]}')
        self.assertEqual(A, jana())
        self.assertEqual(S.potential_from_json(S.potential_to_json(A)), A)
        self.assertEqual(S.potential_from_json(S.potential_to_json(A, named=True)), A)

    def test_named(self):
        A = S.potential_from_json('{"values_named": {"11": 0, "12": 2, "21": 3.5, "22": 0}}')
        self.assertEqual(A, jana())
        B = S.potential_from_json('{"values_named": {"1": 0.5, "2": 0.8}}')
        self.assertEqual((B.d, B.memory), (2, 1))

    def test_errors(self):
        bad = ['{"d": 2, "memory": 1, "values": []}',
               '{"d": 2, "memory": 1, "values": [1, 2, 3]}',
               '{"d": 2, "values": [1, 2]}',
               '{"d": 0, "memory": 1, "values": [1]}',
               '{"d": 2, "memory": 1, "values": [1, "x"]}',
               '{"values_named": {"11": 0, "12": 2}}',
               '[1, 2]']
        for text in bad:
            with self.assertRaises(ParseError):
                S.potential_from_json(text)
        with self.assertRaises(ParseError) as ctx:
            S.potential_from_json('{"d": 2,\n "memory": 1,\n "values": [1, 2,]}')
        self.assertEqual(ctx.exception.line, 3)

    def test_file(self):
        A = jana()
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "a.json")
            S.save_potential(A, path)
            self.assertEqual(S.load_potential(path), A)


if __name__ == "__main__":
    unittest.main()
