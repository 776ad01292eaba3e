from __future__ import absolute_import, print_function
import unittest

import numpy as np

def concordance(scores, labels):
    """Pairwise AUC: share of (positive, negative) pairs ranked correctly, ties half"""
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    total = 0.0
    for s in pos:
        total += np.sum(s > neg) + 0.5 * np.sum(s == neg)
    return total / (len(pos) * len(neg))

def cdf_gap(scores, labels):
    """Largest gap between the empirical score CDFs of the two classes"""
    pos = np.sort(scores[labels == 1])
    neg = np.sort(scores[labels == 0])
    best = 0.0
    for s in np.unique(scores):
        fp = np.searchsorted(pos, s, side='right') / float(len(pos))
        fn = np.searchsorted(neg, s, side='right') / float(len(neg))
        best = max(best, abs(fn - fp))
    return best

def random_instance(rng, max_n, ties=False):
    n = int(rng.integers(10, max_n + 1))
    labels = np.zeros(n)
    labels[:int(rng.integers(1, n))] = 1.0
    rng.shuffle(labels)
    scores = rng.random(n) + 0.3 * labels
    if ties:
        scores = np.round(scores, 1)
    return scores, labels

class confusion_runner(object):
    threshold = 0.5

    def runTest(self):
        from hybridlr.metrics import confusion
        c = confusion(self.scores, self.labels, self.threshold)
        self.assertEqual((c.tp, c.fp, c.tn, c.fn), self.counts)
        self.assertEqual(c.total, len(self.labels))

class confusion_basic(unittest.TestCase, confusion_runner):
    scores = [0.9, 0.2, 0.6, 0.4, 0.1]
    labels = [1, 1, 0, 0, 0]
    counts = (1, 1, 2, 1)

class confusion_score_on_threshold_is_positive(unittest.TestCase, confusion_runner):
    scores = [0.5, 0.5, 0.49999]
    labels = [1, 0, 1]
    counts = (1, 1, 0, 1)

class confusion_custom_threshold(unittest.TestCase, confusion_runner):
    scores = [0.9, 0.85, 0.6, 0.3]
    labels = [1, 0, 1, 0]
    threshold = 0.8
    counts = (1, 1, 1, 1)

class accuracy_is_share_correct(unittest.TestCase):
    def runTest(self):
        from hybridlr.metrics import accuracy, confusion
        rng = np.random.default_rng(50)
        for _ in range(20):
            scores, labels = random_instance(rng, 200)
            c = confusion(scores, labels)
            self.assertEqual(c.tp + c.fp + c.tn + c.fn, len(labels))
            self.assertEqual(accuracy(scores, labels), np.mean((scores >= 0.5) == (labels == 1)))

class auc_matches_concordance(unittest.TestCase):
    def runTest(self):
        from hybridlr.metrics import auc
        rng = np.random.default_rng(51)
        for trial in range(50):
            scores, labels = random_instance(rng, 200, ties=trial % 2 == 0)
            self.assertAlmostEqual(auc(scores, labels), concordance(scores, labels), delta=1e-12)

class ks_matches_cdf_gap(unittest.TestCase):
    def runTest(self):
        from hybridlr.metrics import ks
        rng = np.random.default_rng(52)
        for trial in range(50):
            scores, labels = random_instance(rng, 500, ties=trial % 3 == 0)
            self.assertAlmostEqual(ks(scores, labels), cdf_gap(scores, labels), delta=1e-12)

class auc_of_random_scores(unittest.TestCase):
    def runTest(self):
        from hybridlr.metrics import auc
        rng = np.random.default_rng(53)
        for _ in range(20):
            labels = (rng.random(5000) < 0.5).astype(np.float64)
            value = auc(rng.random(5000), labels)
            self.assertGreater(value, 0.45)
            self.assertLess(value, 0.55)

class monotone_transform_invariance(unittest.TestCase):
    def runTest(self):
        from hybridlr.metrics import auc, ks
        rng = np.random.default_rng(54)
        for _ in range(10):
            scores, labels = random_instance(rng, 300)
            moved = np.exp(3.0 * scores) + 1.0
            self.assertAlmostEqual(auc(moved, labels), auc(scores, labels), delta=1e-12)
            self.assertAlmostEqual(ks(moved, labels), ks(scores, labels), delta=1e-12)
            self.assertAlmostEqual(auc(1.0 - scores, labels), 1.0 - auc(scores, labels), delta=1e-12)

class extremes(unittest.TestCase):
    def runTest(self):
        from hybridlr.metrics import auc, ks
        labels = np.array([0, 0, 0, 1, 1, 1])
        self.assertAlmostEqual(auc([0.1, 0.2, 0.3, 0.7, 0.8, 0.9], labels), 1.0, places=12)
        self.assertEqual(ks([0.1, 0.2, 0.3, 0.7, 0.8, 0.9], labels), 1.0)
        self.assertEqual(auc([0.9, 0.8, 0.7, 0.3, 0.2, 0.1], labels), 0.0)
        # identical score multisets in both classes
        same = [0.2, 0.5, 0.8, 0.2, 0.5, 0.8]
        self.assertEqual(ks(same, labels), 0.0)
        self.assertAlmostEqual(auc(same, labels), 0.5, places=12)

class roc_curve_shape(unittest.TestCase):
    def runTest(self):
        from hybridlr.metrics import roc
        rng = np.random.default_rng(55)
        scores, labels = random_instance(rng, 300, ties=True)
        curve = roc(scores, labels)
        self.assertEqual((curve.fpr[0], curve.tpr[0]), (0.0, 0.0))
        self.assertEqual((curve.fpr[-1], curve.tpr[-1]), (1.0, 1.0))
        self.assertTrue(np.all(np.diff(curve.fpr) >= 0))
        self.assertTrue(np.all(np.diff(curve.tpr) >= 0))
        self.assertTrue(np.all(np.diff(curve.thresholds) < 0))
        # one point per distinct score plus the origin
        self.assertEqual(len(curve.thresholds), len(np.unique(scores)) + 1)
        self.assertTrue(0.0 <= curve.auc <= 1.0)
        self.assertTrue(0.0 <= curve.ks <= 1.0)
        self.assertEqual(list(curve.table().columns), ['threshold', 'fpr', 'tpr'])

class evaluate_bundle(unittest.TestCase):
    def runTest(self):
        from hybridlr.metrics import evaluate, accuracy, auc, ks, Scores
        rng = np.random.default_rng(56)
        scores, labels = random_instance(rng, 300)
        s = evaluate(scores, labels)
        self.assertEqual(s.accuracy, accuracy(scores, labels))
        self.assertEqual(s.auc, auc(scores, labels))
        self.assertEqual(s.ks, ks(scores, labels))
        again = Scores.from_dict(s.to_dict())
        self.assertEqual((again.accuracy, again.auc, again.ks), (s.accuracy, s.auc, s.ks))

class metric_errors(unittest.TestCase):
    def runTest(self):
        from hybridlr.metrics import auc, ks, confusion
        from hybridlr.parser import LengthMismatch, SingleClass
        with self.assertRaises(LengthMismatch):
            confusion([0.1, 0.2], [1])
        with self.assertRaises(LengthMismatch):
            auc([0.1, 0.2], [1, 0, 1])
        with self.assertRaises(SingleClass):
            auc([0.1, 0.2, 0.3], [1, 1, 1])
        with self.assertRaises(SingleClass):
            ks([0.1, 0.2], [0, 0])
        with self.assertRaises(ValueError):
            confusion([0.1], [1], 1.5)
