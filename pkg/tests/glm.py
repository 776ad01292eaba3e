from __future__ import absolute_import, print_function
import unittest, math

import numpy as np

def logistic_data(rng, n, beta):
    X = rng.standard_normal((n, len(beta) - 1))
    eta = beta[0] + X.dot(beta[1:])
    y = (rng.random(n) < 1.0 / (1.0 + np.exp(-eta))).astype(np.float64)
    return X, y

class runner(object):
    """Fit a small design and compare with known coefficients"""
    places = 6

    def runTest(self):
        from hybridlr.glm import fit_logistic
        X, y = self.design()
        model = fit_logistic(X, y)
        self.assertTrue(model.converged)
        for got, expected in zip(model.beta, self.beta):
            self.assertAlmostEqual(got, expected, places=self.places)

class intercept_only(unittest.TestCase, runner):
    def design(self):
        return np.empty((10, 0)), np.array([1.0] * 8 + [0.0] * 2)
    beta = [math.log(4.0)]

class saturated_two_cells(unittest.TestCase, runner):
    def design(self):
        x = np.array([0.0] * 10 + [1.0] * 10)
        y = np.array([1.0] * 5 + [0.0] * 5 + [1.0] * 8 + [0.0] * 2)
        return x, y
    beta = [0.0, math.log(4.0)]

class matches_generic_optimizer(unittest.TestCase):
    def runTest(self):
        from scipy import optimize
        from hybridlr.glm import fit_logistic
        rng = np.random.default_rng(20)
        for trial in range(20):
            p = int(rng.integers(1, 4))
            beta = rng.uniform(-1.0, 1.0, p + 1)
            X, y = logistic_data(rng, 100, beta)
            D = np.column_stack([np.ones(len(y)), X])

            def nll(b):
                eta = D.dot(b)
                return np.sum(np.logaddexp(0.0, eta) - y * eta)

            def grad(b):
                return D.T.dot(1.0 / (1.0 + np.exp(-D.dot(b))) - y)

            oracle = optimize.minimize(nll, np.zeros(p + 1), jac=grad, method='BFGS',
                                       options={'gtol': 1e-10, 'maxiter': 10000})
            model = fit_logistic(X, y)
            np.testing.assert_allclose(model.beta, oracle.x, rtol=0, atol=1e-6)
            # score equations hold at the fit
            fitted = 1.0 / (1.0 + np.exp(-D.dot(model.beta)))
            self.assertLess(np.max(np.abs(D.T.dot(y - fitted))), 1e-6)
            self.assertAlmostEqual(fitted.sum(), y.sum(), places=6)

class likelihood_never_decreases(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import fit_logistic
        rng = np.random.default_rng(21)
        X, y = logistic_data(rng, 500, np.array([0.3, 2.0, -1.5, 0.7]))
        model = fit_logistic(X, y)
        for a, b in zip(model.history, model.history[1:]):
            self.assertGreaterEqual(b, a - 1e-12 * abs(a))
        self.assertEqual(model.history[-1], model.log_likelihood)

class wald_is_scale_invariant(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import fit_logistic
        rng = np.random.default_rng(22)
        X, y = logistic_data(rng, 1000, np.array([-0.4, 0.8, 0.3]))
        a = fit_logistic(X, y, ['u', 'v'])
        b = fit_logistic(X * np.array([1000.0, 0.01]), y, ['u', 'v'])
        for name in ('u', 'v'):
            self.assertAlmostEqual(a.wald(name), b.wald(name), delta=1e-8 * max(1.0, a.wald(name)))
        self.assertAlmostEqual(a.coef('u'), 1000.0 * b.coef('u'), delta=1e-6)

class model_accessors(unittest.TestCase):
    def runTest(self):
        import json
        from hybridlr.glm import fit_logistic, predict_proba, LogisticModel
        from hybridlr.parser import UnknownVariable, ColumnMismatch
        rng = np.random.default_rng(23)
        X, y = logistic_data(rng, 400, np.array([0.5, 1.0, -1.0]))
        model = fit_logistic(X, y, ['a', 'b'])
        self.assertAlmostEqual(float(predict_proba(model, np.zeros(2))[0]),
                               1.0 / (1.0 + math.exp(-model.intercept)), places=14)
        self.assertGreater(model.coef('a'), 0.0)
        self.assertLess(model.coef('b'), 0.0)
        self.assertLess(model.p('a'), 1e-6)
        with self.assertRaises(UnknownVariable):
            model.coef('c')
        with self.assertRaises(ColumnMismatch):
            predict_proba(model, np.zeros((3, 3)))
        again = LogisticModel.from_dict(json.loads(json.dumps(model.to_dict())))
        np.testing.assert_array_equal(again.beta, model.beta)
        np.testing.assert_array_equal(predict_proba(again, X), predict_proba(model, X))
        table = model.coefficient_table()
        self.assertEqual(list(table['term']), ['Intercept', 'a', 'b'])

class rank_deficient_design(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import fit_logistic, FitOptions
        from hybridlr.parser import SingularInformation
        rng = np.random.default_rng(24)
        x = rng.standard_normal(200)
        y = (rng.random(200) < 0.5).astype(np.float64)
        X = np.column_stack([x, 2.0 * x])
        with self.assertRaises(SingularInformation):
            fit_logistic(X, y)
        model = fit_logistic(X, y, opts=FitOptions(ridge_on_singular=True))
        self.assertTrue(model.ridge_used)
        self.assertTrue(np.all(np.isfinite(model.beta)))

class separated_data_is_flagged(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import fit_logistic
        x = np.arange(-10.0, 10.0)
        y = (x > 0).astype(np.float64)
        model = fit_logistic(x, y)
        self.assertTrue(model.separated or not model.converged)

# -----------------------------------------------------------------------------
# Interaction screening fit
# -----------------------------------------------------------------------------

class interaction_pair_constant_column(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import fit_interaction_pair
        from hybridlr.parser import SingularInformation
        rng = np.random.default_rng(25)
        a = rng.standard_normal(100)
        y = (rng.random(100) < 0.5).astype(np.float64)
        with self.assertRaises(SingularInformation):
            fit_interaction_pair(a, np.zeros(100), y)

class interaction_null_is_calibrated(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import fit_interaction_pair
        rng = np.random.default_rng(26)
        ps = []
        for _ in range(200):
            a = rng.standard_normal(5000)
            b = rng.standard_normal(5000)
            y = (rng.random(5000) < 1.0 / (1.0 + np.exp(-(0.3 + 0.5 * a - 0.5 * b)))).astype(np.float64)
            model, wald, p = fit_interaction_pair(a, b, y, ('a', 'b'))
            self.assertEqual(model.terms, ['a', 'b', 'a*b'])
            ps.append(p)
        median = float(np.median(ps))
        self.assertGreater(median, 0.35)
        self.assertLess(median, 0.65)

class interaction_has_power(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import fit_interaction_pair
        rng = np.random.default_rng(27)
        hits = 0
        for _ in range(50):
            a = rng.standard_normal(5000)
            b = rng.standard_normal(5000)
            eta = 0.2 + 0.5 * a + 0.5 * b + 1.0 * a * b
            y = (rng.random(5000) < 1.0 / (1.0 + np.exp(-eta))).astype(np.float64)
            hits += fit_interaction_pair(a, b, y)[2] < 0.01
        self.assertGreaterEqual(hits, 48)

# -----------------------------------------------------------------------------
# Stepwise selection
# -----------------------------------------------------------------------------

def stepwise_data(rng, n=2000, strong=1.5):
    X = rng.standard_normal((n, 10))
    eta = -0.2 + strong * X[:, 0]
    y = (rng.random(n) < 1.0 / (1.0 + np.exp(-eta))).astype(np.float64)
    return X, y, ['s'] + ['n%d' % i for i in range(1, 10)]

class stepwise_finds_signal(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import stepwise_select
        rng = np.random.default_rng(28)
        noise_in = 0
        runs = 30
        for _ in range(runs):
            X, y, names = stepwise_data(rng)
            events = []
            model = stepwise_select(X, y, names, 0.15, 0.15, trace=events.append)
            self.assertIn('s', model.terms)
            self.assertEqual(events[0][:2], ('enter', 's'))
            noise_in += len([t for t in model.terms if t != 's'])
            # every kept term passes the stay test
            for t in model.terms:
                self.assertLessEqual(model.p(t), 0.15)
        self.assertLessEqual(noise_in / float(runs * 9), 0.3)

class stepwise_pure_noise_stays_empty(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import stepwise_select
        rng = np.random.default_rng(29)
        empty = 0
        for _ in range(30):
            X, y, names = stepwise_data(rng, strong=0.0)
            model = stepwise_select(X, y, names, 0.0001, 0.0001)
            empty += model.terms == []
        self.assertGreaterEqual(empty, 29)

class stepwise_errors(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import stepwise_select
        from hybridlr.parser import NoCandidates
        with self.assertRaises(NoCandidates):
            stepwise_select(np.empty((10, 0)), np.zeros(10), [])
        with self.assertRaises(ValueError):
            stepwise_select(np.zeros((10, 1)), np.zeros(10), ['x'], 1.5, 0.1)

class stepwise_skips_duplicate_column(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import stepwise_select
        rng = np.random.default_rng(30)
        X, y, names = stepwise_data(rng)
        X = np.column_stack([X, X[:, 0]])
        model = stepwise_select(X, y, names + ['s_copy'])
        self.assertEqual(len([t for t in model.terms if t in ('s', 's_copy')]), 1)

# -----------------------------------------------------------------------------
# Variance inflation
# -----------------------------------------------------------------------------

class vif_examples(unittest.TestCase):
    def runTest(self):
        from hybridlr.glm import vif
        h = np.array([[1, 1, 1], [-1, 1, -1], [1, -1, -1], [-1, -1, 1]], dtype=np.float64)
        np.testing.assert_allclose(vif(h), [1.0, 1.0, 1.0], rtol=1e-12)

        rng = np.random.default_rng(31)
        x1 = rng.standard_normal(500)
        x2 = x1 + 0.045 * rng.standard_normal(500)
        r = np.corrcoef(x1, x2)[0, 1]
        values = vif(np.column_stack([x1, x2]))
        np.testing.assert_allclose(values, [1.0 / (1.0 - r * r)] * 2, rtol=1e-9)
        self.assertGreater(values[0], 100.0)

        rng = np.random.default_rng(32)
        values = vif(rng.standard_normal((200, 4)))
        self.assertTrue(np.all(values >= 1.0))

        values = vif(np.column_stack([x1, 3.0 * x1 - 2.0, rng.standard_normal(500)]))
        self.assertEqual(values[0], float('inf'))
        self.assertEqual(values[1], float('inf'))

        with self.assertRaises(ValueError):
            vif(x1.reshape(-1, 1))
        with self.assertRaises(ValueError):
            vif(np.column_stack([x1, np.ones(500)]))
