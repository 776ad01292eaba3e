#!/usr/bin/python
# hybridlr divisive principal component variable clustering
# Started: Oct 2026
#
# Clusters start as one group holding every variable. The group whose
# correlation matrix has the largest second eigenvalue is split along its
# first two principal components, members are then reassigned to the child
# whose first component they correlate with most, and splitting continues
# until the first components explain the requested share of total variance.
# This follows the divisive scheme of SAS VARCLUS without its rotation and
# search options.

from __future__ import print_function, absolute_import, division

import logging
from collections import OrderedDict

import numpy as np
import pandas as pd

from hybridlr.parser import ZeroVarianceColumn, SingleRow

log = logging.getLogger(__name__)

__all__ = ['Cluster', 'ClusterModel', 'RepresentativeReport', 'cluster_variables',
           'one_minus_r2_ratio', 'select_representatives']

MAX_SWEEPS = 20
EIGEN_TOL = 1e-10

class Cluster(object):
    """One cluster: member names, first component loadings over the members
    (unit length, first member's loading non-negative) and first eigenvalue"""
    def __init__(self, members, loadings, eigenvalue, second_eigenvalue):
        self.members = list(members)
        self.loadings = np.asarray(loadings, dtype=np.float64)
        self.eigenvalue = float(eigenvalue)
        self.second_eigenvalue = float(second_eigenvalue)
    def __repr__(self):
        return "Cluster(%s, eig1=%.4f)" % (','.join(self.members), self.eigenvalue)

class ClusterModel(object):
    def __init__(self, names, clusters):
        self.names = list(names)
        self.clusters = list(clusters)
        self.explained = sum(c.eigenvalue for c in self.clusters) / float(len(self.names))
        self.assignments = OrderedDict()
        for i, c in enumerate(self.clusters):
            for m in c.members:
                self.assignments[m] = i
        self.history = []      # explained share after each split

def _eigen(corr, members):
    """First two eigenvalues and the first eigenvector of a member block"""
    if len(members) == 1:
        return 1.0, 0.0, np.ones(1)
    block = corr[np.ix_(members, members)]
    vals, vecs = np.linalg.eigh(block)
    v1 = vecs[:, -1]
    if v1[0] < 0:
        v1 = -v1
    return float(vals[-1]), float(vals[-2]), v1

def _make_cluster(corr, names, members):
    eig1, eig2, v1 = _eigen(corr, members)
    return Cluster([names[i] for i in members], v1, eig1, eig2), members

def _correlate_with_pc1(corr, members, v1, eig1):
    """Correlation of every variable with the block's standardized PC1 score"""
    if eig1 <= EIGEN_TOL:
        return np.zeros(corr.shape[0])
    return corr[:, members].dot(v1) / np.sqrt(eig1)

def _split(corr, members):
    """Split a member list in two, then reassign until stable"""
    block = corr[np.ix_(members, members)]
    vals, vecs = np.linalg.eigh(block)
    r1 = vals[-1] * vecs[:, -1] ** 2
    r2 = vals[-2] * vecs[:, -2] ** 2
    second = r2 > r1
    if not second.any():
        second[np.argmax(r2 - r1)] = True
    if second.all():
        second[np.argmax(r1 - r2)] = False
    groups = [[m for m, s in zip(members, second) if not s], [m for m, s in zip(members, second) if s]]

    def score(gs):
        return sum(_eigen(corr, g)[0] for g in gs)

    best, best_score = groups, score(groups)
    seen = set()
    for sweep in range(MAX_SWEEPS):
        comps = [_eigen(corr, g) for g in groups]
        r = np.vstack([_correlate_with_pc1(corr, g, c[2], c[0]) ** 2 for g, c in zip(groups, comps)])
        new = [[], []]
        for m in members:
            # stay put on ties
            own = 0 if m in groups[0] else 1
            other = 1 - own
            new[other if r[other, m] > r[own, m] + EIGEN_TOL else own].append(m)
        if not new[0] or not new[1]:
            break
        key = tuple(new[0])
        if new == groups or key in seen:
            break
        seen.add(key)
        groups = new
        s = score(groups)
        if s > best_score:
            best, best_score = groups, s
    return best

def cluster_variables(data, names, min_explained=0.9, max_eigen2=0.0):
    """Divisive clustering of the columns of ``data``.

    Splits until the clusters' first eigenvalues explain ``min_explained`` of the
    total variance, every cluster is a singleton, or no multi-member cluster has a
    second eigenvalue above ``max_eigen2``.

    >>> x = np.array([[1., 2., 0.], [2., 4., 1.], [3., 6., 0.], [4., 8., 1.]])
    >>> m = cluster_variables(x, ['a', 'b', 'c'])
    >>> [c.members for c in m.clusters]
    [['a', 'b'], ['c']]
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2 or data.shape[1] < 1:
        raise ValueError("cluster_variables needs at least one column")
    if data.shape[0] < 2:
        raise SingleRow("variable clustering needs at least two rows")
    if not 0.0 < min_explained <= 1.0:
        raise ValueError("min_explained must be in (0,1], got %r" % min_explained)
    names = input_names = list(names)
    sd = data.std(axis=0)
    for i, s in enumerate(sd):
        if not s > 0:
            raise ZeroVarianceColumn("variable '%s' has zero variance" % names[i])

    # Work in name order so ties and PC1 signs do not depend on column order
    order = sorted(range(len(names)), key=lambda i: names[i])
    names = [names[i] for i in order]
    p = len(names)
    corr = np.atleast_2d(np.corrcoef(data[:, order], rowvar=False))

    groups = [list(range(p))]
    clusters = [_make_cluster(corr, names, groups[0])[0]]
    history = []
    while True:
        explained = sum(c.eigenvalue for c in clusters) / float(p)
        history.append(explained)
        if explained >= min_explained - EIGEN_TOL:
            break
        splittable = [i for i, g in enumerate(groups) if len(g) > 1
                      and clusters[i].second_eigenvalue > max_eigen2 + EIGEN_TOL]
        if not splittable:
            break
        target = max(splittable, key=lambda i: (clusters[i].second_eigenvalue, -i))
        a, b = _split(corr, groups[target])
        log.debug("varclus: split %s (eig2=%.4f) into %d + %d", clusters[target].members[0],
                  clusters[target].second_eigenvalue, len(a), len(b))
        groups[target:target + 1] = [a, b]
        clusters[target:target + 1] = [_make_cluster(corr, names, a)[0], _make_cluster(corr, names, b)[0]]

    # Present clusters by their first member in name order
    ranked = sorted(zip(groups, clusters), key=lambda gc: gc[0][0])
    model = ClusterModel(input_names, [c for _, c in ranked])
    model.history = history
    return model

def one_minus_r2_ratio(r2_own, r2_next):
    """(1 - R2 own cluster) / (1 - R2 next closest cluster); +inf when the next
    cluster fits perfectly.

    >>> one_minus_r2_ratio(1.0, 0.3)
    0.0
    >>> round(one_minus_r2_ratio(0.64, 0.1), 10)
    0.4
    >>> one_minus_r2_ratio(0.5, 1.0)
    inf
    """
    if not (0.0 <= r2_own <= 1.0 and 0.0 <= r2_next <= 1.0):
        raise ValueError("R-squared values must lie in [0,1]: %r, %r" % (r2_own, r2_next))
    if r2_next >= 1.0:
        return float('inf')
    return (1.0 - r2_own) / (1.0 - r2_next)

class RepresentativeReport(object):
    """Per variable R-squared with its own and the nearest other cluster, the
    1 - R2 ratio, and the chosen representative of each cluster"""
    def __init__(self, rows, representatives):
        self.rows = rows                        # list of dicts, cluster order
        self.representatives = representatives  # one per cluster, cluster order

    def table(self):
        return pd.DataFrame(self.rows, columns=['variable', 'cluster', 'r2_own', 'r2_next',
                                                'ratio', 'is_representative'])

    def to_csv(self, path):
        self.table().to_csv(path, index=False, float_format='%.17g')

    def to_dict(self):
        return {'rows': self.rows, 'representatives': self.representatives}

    @classmethod
    def from_dict(cls, d):
        return cls([dict(r) for r in d['rows']], list(d['representatives']))

def _r2(a, b):
    r = np.corrcoef(a, b)[0, 1]
    return float(min(max(r * r, 0.0), 1.0))

def select_representatives(model, data):
    """Pick the lowest 1 - R2 ratio member of each cluster, ties by name.
    ``data`` has its columns in the order the model was built with."""
    data = np.asarray(data, dtype=np.float64)
    z = (data - data.mean(axis=0)) / data.std(axis=0)
    index = dict((n, i) for i, n in enumerate(model.names))
    if data.shape[1] != len(model.names):
        raise ValueError("data has %d columns, model has %d variables" % (data.shape[1], len(model.names)))
    return _representatives(model, z, index)

def _representatives(model, z, index):
    scores = []
    for c in model.clusters:
        cols = [index[m] for m in c.members]
        scores.append(z[:, cols].dot(c.loadings))
    rows = []
    reps = []
    for ci, c in enumerate(model.clusters):
        best = None
        for m in c.members:
            x = z[:, index[m]]
            own = 1.0 if len(c.members) == 1 else _r2(x, scores[ci])
            others = [_r2(x, scores[k]) for k in range(len(model.clusters)) if k != ci]
            nxt = max(others) if others else 0.0
            ratio = one_minus_r2_ratio(own, nxt)
            rows.append({'variable': m, 'cluster': ci, 'r2_own': own, 'r2_next': nxt,
                         'ratio': ratio, 'is_representative': False})
            if best is None or ratio < best[0]:
                best = (ratio, m, len(rows) - 1)
        rows[best[2]]['is_representative'] = True
        reps.append(best[1])
    return RepresentativeReport(rows, reps)
