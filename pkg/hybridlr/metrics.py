#!/usr/bin/python
# hybridlr classification metrics: accuracy, ROC/AUC and the KS statistic
# Started: Oct 2026

from __future__ import print_function, absolute_import, division

import numpy as np
import pandas as pd
from sklearn import metrics as skm

from hybridlr.parser import LengthMismatch, SingleClass

__all__ = ['ConfusionCounts', 'RocCurve', 'Scores', 'confusion', 'accuracy', 'roc', 'auc', 'ks', 'evaluate']

class ConfusionCounts(object):
    def __init__(self, tp, fp, tn, fn):
        self.tp, self.fp, self.tn, self.fn = int(tp), int(fp), int(tn), int(fn)

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self):
        return (self.tp + self.tn) / float(self.total) if self.total else float('nan')

    def __repr__(self):
        return "ConfusionCounts(tp=%d, fp=%d, tn=%d, fn=%d)" % (self.tp, self.fp, self.tn, self.fn)

def _check(scores, labels):
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels, dtype=np.float64).ravel()
    if len(scores) != len(labels):
        raise LengthMismatch("%d scores for %d labels" % (len(scores), len(labels)))
    return scores, labels

def _check_classes(labels):
    positives = int(labels.sum())
    if positives == 0 or positives == len(labels):
        raise SingleClass("both classes are needed, got %d positives of %d" % (positives, len(labels)))

def confusion(scores, labels, threshold=0.5):
    """Confusion counts predicting 1 where score >= threshold.

    >>> confusion([0.9, 0.1], [1, 0])
    ConfusionCounts(tp=1, fp=0, tn=1, fn=0)
    >>> confusion([0.5, 0.5, 0.5], [1, 0, 1]).accuracy == 2 / 3.
    True
    """
    scores, labels = _check(scores, labels)
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be in [0,1], got %r" % threshold)
    predicted = (scores >= threshold).astype(np.int64)
    tn, fp, fn, tp = skm.confusion_matrix(labels.astype(np.int64), predicted, labels=[0, 1]).ravel()
    return ConfusionCounts(tp, fp, tn, fn)

def accuracy(scores, labels, threshold=0.5):
    return confusion(scores, labels, threshold).accuracy

# ------------------------------------------------------------------
# RocCurve object
#
# One point per distinct score, thresholds descending, so TPR and FPR
# rise from (0,0) to (1,1). The first threshold is above every score.
# ------------------------------------------------------------------

class RocCurve(object):
    def __init__(self, thresholds, tpr, fpr):
        self.thresholds = np.asarray(thresholds, dtype=np.float64)
        self.tpr = np.asarray(tpr, dtype=np.float64)
        self.fpr = np.asarray(fpr, dtype=np.float64)

    @property
    def auc(self):
        return float(skm.auc(self.fpr, self.tpr))

    @property
    def ks(self):
        return float(np.max(np.abs(self.tpr - self.fpr)))

    def table(self):
        return pd.DataFrame({'threshold': self.thresholds, 'fpr': self.fpr, 'tpr': self.tpr},
                            columns=['threshold', 'fpr', 'tpr'])

    def to_csv(self, path):
        self.table().to_csv(path, index=False, float_format='%.17g')

def roc(scores, labels):
    scores, labels = _check(scores, labels)
    _check_classes(labels)
    fpr, tpr, thresholds = skm.roc_curve(labels, scores, drop_intermediate=False)
    return RocCurve(thresholds, tpr, fpr)

def auc(scores, labels):
    """Trapezoidal area under the ROC, ties counting one half.

    >>> auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])
    0.75
    >>> auc([0.5, 0.5], [0, 1])
    0.5
    """
    return roc(scores, labels).auc

def ks(scores, labels):
    """Largest gap between the score CDFs of negatives and positives.

    >>> ks([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1])
    1.0
    """
    return roc(scores, labels).ks

class Scores(object):
    """Accuracy, AUC and KS of one model on one data set"""
    def __init__(self, accuracy, auc, ks):
        self.accuracy = accuracy
        self.auc = auc
        self.ks = ks

    def to_dict(self):
        return {'accuracy': self.accuracy, 'auc': self.auc, 'ks': self.ks}

    @classmethod
    def from_dict(cls, d):
        return cls(d['accuracy'], d['auc'], d['ks'])

    def __repr__(self):
        return "Scores(acc=%.3f, auc=%.3f, ks=%.3f)" % (self.accuracy, self.auc, self.ks)

def evaluate(scores, labels, threshold=0.5):
    curve = roc(scores, labels)
    return Scores(accuracy(scores, labels, threshold), curve.auc, curve.ks)
