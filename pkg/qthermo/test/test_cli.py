import os
import json
import math
import unittest
import tempfile

import qthermo.cli as C
from qthermo.shift import Potential, save_potential
from qthermo.errors import DomainError, ParseError


class CLITestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def potential(self, name, A=None, text=None):
        path = self.path(name)
        if A is not None:
            save_potential(A, path)
        else:
            with open(path, 'w') as f:
                f.write(text)
        return path

    def main(self, *argv):
        out = self.path('out')
        status = C.main(list(argv) + ['--output', out])
        return status, out

    def json(self, *argv):
        status, out = self.main(*argv)
        self.assertEqual(status, 0)
        with open(out) as f:
            return json.load(f)


class TestSerialisation(unittest.TestCase):

    def test_round(self):
        self.assertEqual(C.to_builtin(1. / 3.), 0.333333333333)
        self.assertEqual(C.to_builtin([True, 2, None, 'x']), [True, 2, None, 'x'])
        with self.assertRaises(DomainError):
            C.to_builtin(dict(value=float('nan')))
        with self.assertRaises(DomainError):
            C.to_builtin([1., float('inf')])

    def test_resolve_q(self):
        self.assertEqual(C.RunConfig('qfun', q_tilde=0.5).resolve_q(), 1.5)
        self.assertEqual(C.RunConfig('qfun', q=0.5, q_tilde=1.5).resolve_q(), 0.5)
        with self.assertRaises(DomainError):
            C.RunConfig('qfun', q=0.5, q_tilde=1.4).resolve_q()
        with self.assertRaises(ParseError):
            C.RunConfig('qfun').resolve_q()


class TestSubcommands(CLITestCase):

    def test_qfun(self):
        result = self.json('qfun', '--function', 'log', '--u', '2', '--q', '0.5')
        self.assertEqual(list(result)[:2], ['subcommand', 'seed'])
        self.assertEqual(result['seed'], 0)
        self.assertAlmostEqual(result['value'], 0.828427124746, places=12)
        status, _ = self.main('qfun', '--function', 'exp', '--u', '-3', '--q', '0.5')
        self.assertEqual(status, 2)
        status, _ = self.main('qfun', '--u', '1', '--q', '0.5', '--q-tilde', '1.4')
        self.assertEqual(status, 2)

    def test_selftest(self):
        result = self.json('selftest', '--samples', '10000', '--seed', '1')
        self.assertEqual(result['seed'], 1)
        self.assertTrue(result['prop1']['passed'])
        self.assertLessEqual(result['prop14']['max_violation'], 1e-9)

    def test_static_pressure(self):
        result = self.json('static-pressure', '--a', '0.5,0.8', '--beta', '1.2', '--q', str(1. / 3.))
        self.assertAlmostEqual(result['pressure'], 1.6895, delta=5e-4)
        self.assertAlmostEqual(result['p_star'][0], 0.3172, delta=5e-4)
        stationary = self.json('static-pressure', '--a', '0.5,0.8', '--beta', '1.2', '--q', str(1. / 3.), '--method', 'stationary')
        self.assertGreaterEqual(stationary['pressure'], result['pressure'])

    def test_entropy(self):
        result = self.json('entropy', '--p', '0.5,0.5', '--q', '0.5')
        self.assertAlmostEqual(result['q_entropy'], 0.828427124746, places=11)
        self.assertAlmostEqual(result['renyi'], math.log(2.), places=11)
        self.assertAlmostEqual(result['meson_vericat'], 0.5 * math.log(2.), places=11)

    def test_ruelle(self):
        path = self.potential('A.json', Potential(2, 1, [0., 1.]))
        result = self.json('ruelle', '--potential', path, '--normalize', '--entropy', '1,0.5')
        self.assertAlmostEqual(result['pressure'], math.log1p(math.e), places=10)
        self.assertEqual(len(result['logJ']), 4)
        self.assertLessEqual(result['jacobian_defect'], 1e-10)
        self.assertEqual([e['q'] for e in result['entropies']], [1., 0.5])

    def test_parse_error(self):
        path = self.potential('empty.json', text='{"d": 2, "memory": 1, "values": []}')
        status, _ = self.main('ruelle', '--potential', path)
        self.assertEqual(status, 2)
        status, _ = self.main('ruelle', '--potential', self.path('missing.json'))
        self.assertEqual(status, 2)
        path = self.potential('broken.json', text='{"d": 2,\n "memory": }')
        status, _ = self.main('scan', '--potential', path, '--q', '0.5')
        self.assertEqual(status, 2)

    def test_solve(self):
        path = self.potential('jana.json', text='{"values_named": {"11": 0, "12": 2, "21": 3.5, "22": 0}}')
        result = self.json('solve', '--potential', path, '--q-tilde', '0.5', '--all-branches', '--even')
        self.assertEqual(len(result['branches']), 2)
        self.assertAlmostEqual(result['branches'][0]['c'], 3.70571893, delta=1e-7)
        self.assertAlmostEqual(result['branches'][1]['c'], 3.04428107, delta=1e-7)
        for branch in result['branches']:
            self.assertAlmostEqual(branch['phi'][1], -0.75, delta=1e-7)
        status, _ = self.main('solve', '--potential', path, '--q-tilde', '0.5', '--equilibrium')
        self.assertEqual(status, 3)

    def test_solve_equilibrium(self):
        path = self.potential('A.json', Potential(2, 2, [0.1, -0.2, 0.05, 0.2]))
        result = self.json('solve', '--potential', path, '--q', '1.3', '--equilibrium')
        eq = result['equilibrium']
        self.assertAlmostEqual(eq['pressure'], result['branches'][0]['c'], places=10)
        self.assertLessEqual(abs(eq['bowen_c']), 1e-8)

    def test_derivative(self):
        A = self.potential('A.json', Potential(2, 1, [2., 5.5]))
        B = self.potential('B.json', Potential(2, 1, [1., 0.]))
        result = self.json('derivative', '--potential', A, '--direction', B, '--q', '1.5', '--even')
        self.assertAlmostEqual(result['dPds'], 0.5, delta=1e-6)

    def test_asym_pressure(self):
        A = self.potential('A.json', Potential.constant(2, 1.))
        sequence = self.path('sequence.csv')
        result = self.json('asym-pressure', '--potential', A, '--q', '0.5', '--n-max', '200', '--x0', '2', '--sequence-csv', sequence)
        self.assertAlmostEqual(result['estimate'], math.log(2.), delta=0.01)
        self.assertEqual(result['sequence_csv_path'], sequence)
        self.assertEqual(list(result['fit_params']), ['P', 'alpha', 'beta'])
        with open(sequence, newline='') as f:
            lines = f.read().split('\n')
        self.assertEqual(lines[0], 'n,y')

    def test_scan(self):
        A = self.potential('A.json', Potential.constant(2, 0., memory=2))
        result = self.json('scan', '--potential', A, '--q', '0.5', '--grid', '20')
        self.assertAlmostEqual(result['value'], 0.828427, places=6)
        self.assertEqual(result['objective'], 'q-pressure')
        result = self.json('scan', '--potential', A, '--q', '1', '--grid', '20', '--subadditive')
        self.assertAlmostEqual(result['value'], math.log(2.), delta=1e-6)

    def test_determinism(self):
        A = self.potential('A.json', Potential(2, 2, [0.1, -0.4, 0.3, 0.2]))
        outputs = []
        for name in ('one', 'two'):
            out = self.path(name)
            self.assertEqual(C.main(['scan', '--potential', A, '--q', '1.5', '--grid', '30', '--output', out]), 0)
            with open(out, 'rb') as f:
                outputs.append(f.read())
        self.assertEqual(outputs[0], outputs[1])

    def test_csv(self):
        status, out = self.main('entropy-surface', '--q', '0.9', '--grid', '4')
        self.assertEqual(status, 0)
        with open(out, 'rb') as f:
            data = f.read()
        self.assertNotIn(b'\r', data)
        lines = data.decode().strip().split('\n')
        self.assertEqual(lines[0], 'P12,P21,H_q')
        self.assertEqual(len(lines), 26)
        status, out = self.main('sweep-beta', '--a', '0.5,0.8', '--q', '0.5', '--beta-range', '0,1', '--steps', '11')
        self.assertEqual(status, 0)
        with open(out) as f:
            self.assertEqual(len(f.read().strip().split('\n')), 12)

    def test_json_frame(self):
        result = self.json('entropy-surface', '--q', '0.9', '--grid', '2', '--format', 'json')
        self.assertEqual(result['columns'], ['P12', 'P21', 'H_q'])
        self.assertEqual(len(result['rows']), 9)


class TestRegression(CLITestCase):

    def test_closed_forms(self):
        report = C.paper_regression(criteria=['static_equilibrium', 'jana', 'supex', 'explimeq'])
        self.assertTrue(report.passed, report.failures())
        self.assertEqual(list(report), ['static_equilibrium', 'jana', 'supex', 'explimeq'])
        for entry in report.values():
            self.assertEqual(list(entry), ['passed', 'detail', 'seconds'])
            self.assertGreaterEqual(entry['seconds'], 0.)

    def test_perturbed_jana(self):
        report = C.paper_regression(perturb_jana=0.1, criteria=['jana'])
        self.assertFalse(report.passed)
        self.assertEqual(report.failures(), ['jana'])
        self.assertGreater(report['jana']['detail']['drift'], 1e-4)
        status, _ = self.main('paper-regression', '--perturb-jana', '0.1', '--criteria', 'jana')
        self.assertEqual(status, 1)

    def test_unknown(self):
        with self.assertRaises(ParseError):
            C.paper_regression(criteria=['nothing'])

    def test_all(self):
        report = C.paper_regression()
        self.assertEqual(len(report), len(C.CRITERIA))
        self.assertTrue(report.passed, report.failures())


if __name__ == '__main__':
    unittest.main()
