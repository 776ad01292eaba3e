#!/usr/bin/python
# hybridlr preprocessing: stratified split, median imputation, category
# ordering, variable reduction and weight of evidence encoding
# Started: Oct 2026

from __future__ import print_function, absolute_import, division

import math, logging
from collections import OrderedDict

import numpy as np
import pandas as pd

from hybridlr.ingest import Frame
from hybridlr.parser import DegenerateStratum, UnknownVariable, DataError
from hybridlr import varclus

log = logging.getLogger(__name__)

__all__ = ['SplitResult', 'stratified_split', 'ImputePlan', 'fit_impute', 'apply_impute',
           'CategoryPlan', 'fit_categories', 'apply_categories', 'reduce_variables',
           'WoeBinning', 'WoeEncoder', 'fit_woe', 'apply_woe']

# -----------------------------------------------------------------------------
# Stratified split
# -----------------------------------------------------------------------------

class SplitResult(object):
    def __init__(self, train, valid, seed, fraction, train_rows, valid_rows):
        self.train = train
        self.valid = valid
        self.seed = seed
        self.fraction = fraction
        self.train_rows = train_rows
        self.valid_rows = valid_rows

def stratified_split(frame, fraction, seed):
    """Split rows into train/valid preserving the target class mix.

    Each class contributes ceil(fraction * class size) rows to train, picked by
    a seeded shuffle of that class. Row order within each part follows the
    source frame.
    """
    if frame.target_name is None:
        raise DataError("stratified_split needs a frame with a target")
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must be in (0,1), got %r" % fraction)
    y = frame.target
    rng = np.random.default_rng(seed)
    train_rows = []
    for cls in (0.0, 1.0):
        members = np.flatnonzero(y == cls)
        if len(members) == 0:
            raise DegenerateStratum("target class %d has no rows" % int(cls))
        k = int(math.ceil(fraction * len(members) - 1e-9))
        chosen = rng.permutation(members)[:k]
        train_rows.append(chosen)
    train_rows = np.sort(np.concatenate(train_rows))
    in_train = np.zeros(frame.n_rows, dtype=bool)
    in_train[train_rows] = True
    valid_rows = np.flatnonzero(~in_train)
    log.debug("split %d rows at %.3f seed %r -> %d train, %d valid",
              frame.n_rows, fraction, seed, len(train_rows), len(valid_rows))
    return SplitResult(frame.take(train_rows), frame.take(valid_rows), seed, fraction,
                       train_rows, valid_rows)

# -----------------------------------------------------------------------------
# Median imputation with missing indicators
# -----------------------------------------------------------------------------

INDICATOR_PREFIX = 'M_'

class ImputePlan(object):
    """Training medians per variable, indicator names for variables that had
    missing training values, and variables dropped for having none observed"""
    def __init__(self, medians, indicator_names, dropped=()):
        self.medians = OrderedDict(medians)
        self.indicator_names = OrderedDict(indicator_names)
        self.dropped = list(dropped)

    @property
    def variables(self):
        return list(self.medians.keys())

    def to_dict(self):
        return {'medians': list(self.medians.items()),
                'indicators': list(self.indicator_names.items()),
                'dropped': self.dropped}

    @classmethod
    def from_dict(cls, d):
        return cls([tuple(x) for x in d['medians']], [tuple(x) for x in d['indicators']], d['dropped'])

def fit_impute(train):
    if train.n_rows == 0:
        raise DataError("fit_impute needs a non-empty frame")
    medians = []
    indicators = []
    dropped = []
    for name in train.variables:
        values = train.column(name)
        observed = values[~np.isnan(values)]
        if len(observed) == 0:
            dropped.append(name)
            log.debug("impute: '%s' has no observed training values, dropped", name)
            continue
        medians.append((name, float(np.median(observed))))
        if len(observed) < len(values):
            indicators.append((name, INDICATOR_PREFIX + name))
    return ImputePlan(medians, indicators, dropped)

def apply_impute(plan, frame):
    """Fill planned variables with training medians and append indicators.
    Columns outside the plan other than the target are left out."""
    columns = []
    flags = []
    for name, median in plan.medians.items():
        if name not in frame:
            raise UnknownVariable("imputation: variable '%s' not present" % name)
        values = frame.column(name)
        missing = np.isnan(values)
        columns.append((name, np.where(missing, median, values)))
        if name in plan.indicator_names:
            flags.append((plan.indicator_names[name], missing.astype(np.float64)))
    if frame.target_name is not None:
        flags.append((frame.target_name, frame.target))
    return Frame(columns + flags, frame.target_name, frame.levels)

# -----------------------------------------------------------------------------
# Category ordering
#
# Alphabetically coded categorical columns are recoded by ascending training
# event rate, ties broken by token.
# -----------------------------------------------------------------------------

class CategoryPlan(object):
    def __init__(self, maps):
        self.maps = OrderedDict(maps)   # column -> OrderedDict(token -> ordinal)

    def to_dict(self):
        return [(k, list(v.items())) for k, v in self.maps.items()]

def fit_categories(train):
    maps = []
    y = train.target
    for name, levels in sorted(train.levels.items()):
        codes = train.column(name)
        rates = []
        for code, token in enumerate(levels):
            hit = codes == code
            rate = float(y[hit].mean()) if hit.any() else 0.0
            rates.append((rate, token))
        rates.sort()
        maps.append((name, OrderedDict((token, float(rank)) for rank, (_, token) in enumerate(rates))))
    return CategoryPlan(maps)

def apply_categories(plan, frame):
    columns = []
    for name, mapping in plan.maps.items():
        if name not in frame.levels:
            continue
        lookup = np.array([mapping.get(t, np.nan) for t in frame.levels[name]] + [np.nan])
        codes = frame.column(name)
        idx = np.where(np.isnan(codes), len(lookup) - 1, np.nan_to_num(codes)).astype(np.intp)
        columns.append((name, lookup[idx]))
    out = frame.with_columns(columns)
    out.levels = dict((k, v) for k, v in frame.levels.items() if k not in plan.maps)
    return out

# -----------------------------------------------------------------------------
# Variable reduction by clustering
# -----------------------------------------------------------------------------

def reduce_variables(train, min_explained=0.9, max_eigen2=0.0):
    """Cluster the imputed training variables and keep one representative per
    cluster. Returns (kept names, constant names, RepresentativeReport or None)."""
    names = []
    constant = []
    for name in train.variables:
        values = train.column(name)
        if np.all(values == values[0]):
            constant.append(name)
        else:
            names.append(name)
    if not names:
        return [], constant, None
    data = train.matrix(names)
    model = varclus.cluster_variables(data, names, min_explained, max_eigen2)
    report = varclus.select_representatives(model, data)
    kept = [n for n in names if n in set(report.representatives)]
    log.debug("reduce: %d variables -> %d clusters", len(names), len(model.clusters))
    return kept, constant, report

# ------------------------------------------------------------------
# WoeBinning object
#
#    .edges     - Interior cut points, ascending. Bin b is
#                 (edges[b-1], edges[b]] with the outer bins unbounded
#    .woe       - WOE value per bin
#    .events    - Event (target 1) count per bin
#    .nonevents - Nonevent count per bin
# ------------------------------------------------------------------

class WoeBinning(object):
    def __init__(self, name, edges, woe, events, nonevents):
        self.name = name
        self.edges = np.asarray(edges, dtype=np.float64)
        self.woe = np.asarray(woe, dtype=np.float64)
        self.events = np.asarray(events, dtype=np.int64)
        self.nonevents = np.asarray(nonevents, dtype=np.int64)

    @property
    def n_bins(self):
        return len(self.woe)

    def bin_index(self, values):
        return np.searchsorted(self.edges, values, side='left')

    def transform(self, values):
        return self.woe[self.bin_index(values)]

    def information_value(self, total_events, total_nonevents):
        share_e = self.events / float(total_events)
        share_n = self.nonevents / float(total_nonevents)
        return float(np.sum((share_e - share_n) * self.woe))

    def to_dict(self):
        return {'name': self.name, 'edges': self.edges.tolist(), 'woe': self.woe.tolist(),
                'events': self.events.tolist(), 'nonevents': self.nonevents.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(d['name'], d['edges'], d['woe'], d['events'], d['nonevents'])

class WoeEncoder(object):
    def __init__(self, binnings, total_events, total_nonevents, smoothing, dropped=()):
        self.binnings = OrderedDict((b.name, b) for b in binnings)
        self.total_events = int(total_events)
        self.total_nonevents = int(total_nonevents)
        self.smoothing = smoothing
        self.dropped = list(dropped)

    @property
    def variables(self):
        return list(self.binnings.keys())

    def information_values(self):
        return OrderedDict((n, b.information_value(self.total_events, self.total_nonevents))
                           for n, b in self.binnings.items())

    def binning_table(self):
        """One row per (variable, bin) with bounds, counts and WOE"""
        rows = []
        for name, b in self.binnings.items():
            lower = np.concatenate([[-np.inf], b.edges])
            upper = np.concatenate([b.edges, [np.inf]])
            for i in range(b.n_bins):
                rows.append((name, i, lower[i], upper[i], int(b.events[i]), int(b.nonevents[i]), b.woe[i]))
        return pd.DataFrame(rows, columns=['variable', 'bin', 'lower', 'upper', 'events', 'nonevents', 'woe'])

    def to_dict(self):
        return {'total_events': self.total_events, 'total_nonevents': self.total_nonevents,
                'smoothing': self.smoothing, 'dropped': self.dropped,
                'binnings': [b.to_dict() for b in self.binnings.values()]}

    @classmethod
    def from_dict(cls, d):
        return cls([WoeBinning.from_dict(b) for b in d['binnings']], d['total_events'],
                   d['total_nonevents'], d['smoothing'], d['dropped'])

def woe_values(events, nonevents, total_events, total_nonevents, smoothing=0.5):
    """Per-bin weight of evidence with additive smoothing per cell.

    >>> [round(float(w), 4) for w in woe_values([30, 10], [10, 30], 40, 40, 0.0)]
    [1.0986, -1.0986]
    """
    events = np.asarray(events, dtype=np.float64)
    nonevents = np.asarray(nonevents, dtype=np.float64)
    n_bins = len(events)
    share_e = (events + smoothing) / (total_events + n_bins * smoothing)
    share_n = (nonevents + smoothing) / (total_nonevents + n_bins * smoothing)
    with np.errstate(divide='ignore'):
        return np.log(share_e / share_n)

def _cut_points(values, n_bins):
    distinct = np.unique(values)
    if len(distinct) <= n_bins:
        return distinct[:-1]
    q = np.arange(1, n_bins) / float(n_bins)
    cuts = np.unique(np.quantile(values, q, method='inverted_cdf'))
    return cuts[cuts < distinct[-1]]

def fit_woe(train, n_bins=10, smoothing=0.5, variables=None):
    """Equal-frequency WOE binning fitted on the training frame. Constant
    variables are dropped and listed in ``dropped``."""
    if train.target_name is None:
        raise DataError("fit_woe needs a frame with a target")
    y = train.target
    total_e = int(y.sum())
    total_n = int(len(y) - total_e)
    binnings = []
    dropped = []
    for name in (train.variables if variables is None else variables):
        values = train.column(name)
        if np.isnan(values).any():
            raise DataError("fit_woe: variable '%s' still has missing values" % name)
        cuts = _cut_points(values, n_bins)
        if len(cuts) == 0:
            dropped.append(name)
            log.debug("woe: '%s' is constant, dropped", name)
            continue
        idx = np.searchsorted(cuts, values, side='left')
        events = np.bincount(idx, weights=y, minlength=len(cuts) + 1).round().astype(np.int64)
        counts = np.bincount(idx, minlength=len(cuts) + 1)
        nonevents = counts - events
        woe = woe_values(events, nonevents, total_e, total_n, smoothing)
        binnings.append(WoeBinning(name, cuts, woe, events, nonevents))
    return WoeEncoder(binnings, total_e, total_n, smoothing, dropped)

def apply_woe(enc, frame):
    """Replace every encoded variable by the WOE of its bin. Columns the
    encoder does not know, other than the target, are left out."""
    columns = []
    for name, b in enc.binnings.items():
        if name not in frame:
            raise UnknownVariable("woe: variable '%s' not present" % name)
        columns.append((name, b.transform(frame.column(name))))
    if frame.target_name is not None:
        columns.append((frame.target_name, frame.target))
    return Frame(columns, frame.target_name)
