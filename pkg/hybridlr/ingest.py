#!/usr/bin/python
# hybridlr CSV ingestion into typed numeric frames
# Started: Oct 2026

from __future__ import print_function, absolute_import, division

import logging
from collections import OrderedDict

import numpy as np
import pandas as pd

from hybridlr.parser import MissingTargetColumn, NonBinaryTarget, EmptyFile, UnknownVariable, DataError

log = logging.getLogger(__name__)

__all__ = ['Frame', 'IngestConfig', 'load_csv', 'write_csv']

# ------------------------------------------------------------------
# Frame object
#
# Immutable columnar numeric dataset. Missing cells are NaN.
#
#    .names       - Column names in order
#    .n_rows      - Row count
#    .target_name - Binary target column, or None
#    .levels      - Category tokens per alphabetically coded column,
#                   index is the code
# ------------------------------------------------------------------

class Frame(object):
    def __init__(self, columns, target_name=None, levels=None):
        cols = OrderedDict()
        n_rows = None
        for name, values in columns:
            if name in cols:
                raise DataError("duplicate column name '%s'" % name)
            values = np.array(values, dtype=np.float64)
            if values.ndim != 1:
                raise DataError("column '%s' is not one dimensional" % name)
            if n_rows is None:
                n_rows = len(values)
            elif len(values) != n_rows:
                raise DataError("column '%s' has %d rows, expected %d" % (name, len(values), n_rows))
            values.setflags(write=False)
            cols[name] = values
        if target_name is not None:
            if target_name not in cols:
                raise MissingTargetColumn("target column '%s' not present" % target_name)
            t = cols[target_name]
            if np.isnan(t).any() or not np.isin(t, (0.0, 1.0)).all():
                raise NonBinaryTarget("target column '%s' must hold only 0 and 1" % target_name)
        self._columns = cols
        self.n_rows = 0 if n_rows is None else n_rows
        self.target_name = target_name
        self.levels = dict((k, list(v)) for k, v in (levels or {}).items() if k in cols)

    @property
    def names(self):
        return list(self._columns.keys())

    @property
    def variables(self):
        """Column names other than the target"""
        return [n for n in self._columns if n != self.target_name]

    @property
    def target(self):
        if self.target_name is None:
            return None
        return self._columns[self.target_name]

    def __contains__(self, name):
        return name in self._columns

    def __len__(self):
        return self.n_rows

    def column(self, name):
        try:
            return self._columns[name]
        except KeyError:
            raise UnknownVariable("unknown variable '%s'" % name)

    def matrix(self, names):
        """n_rows x len(names) float64 matrix of the named columns"""
        if not names:
            return np.empty((self.n_rows, 0))
        return np.column_stack([self.column(n) for n in names])

    def take(self, rows):
        """New frame holding the given row indices, in that order"""
        rows = np.asarray(rows, dtype=np.intp)
        return Frame([(n, v[rows]) for n, v in self._columns.items()], self.target_name, self.levels)

    def select(self, names, keep_target=True):
        names = list(names)
        if keep_target and self.target_name is not None and self.target_name not in names:
            names.append(self.target_name)
        target = self.target_name if self.target_name in names else None
        return Frame([(n, self.column(n)) for n in names], target, self.levels)

    def with_columns(self, columns):
        """New frame with the (name, values) pairs replacing or appending columns"""
        cols = OrderedDict(self._columns)
        for name, values in columns:
            cols[name] = values
        return Frame(list(cols.items()), self.target_name, self.levels)

    def to_pandas(self):
        return pd.DataFrame(OrderedDict(self._columns))

    def equals(self, other):
        if self.names != other.names or self.target_name != other.target_name:
            return False
        return all(np.array_equal(self.column(n), other.column(n), equal_nan=True) for n in self.names)

    def __repr__(self):
        return "Frame(%d rows, %d cols, target=%s)" % (self.n_rows, len(self._columns), self.target_name)

# ------------------------------------------------------------------
# IngestConfig object
#
#    .target_name       - Target column name
#    .invalid_sentinels - Raw tokens treated as missing
#    .positive_label    - Raw target value mapped to 1
#    .categorical       - Columns holding category tokens
#    .category_maps     - Explicit token -> number maps per column; a
#                         categorical column without one is coded
#                         alphabetically and its levels recorded
# ------------------------------------------------------------------

class IngestConfig(object):
    def __init__(self, target_name=None, invalid_sentinels=(), positive_label='1',
                 categorical=(), category_maps=None):
        self.target_name = target_name
        self.invalid_sentinels = [str(s).strip() for s in invalid_sentinels]
        self.positive_label = str(positive_label).strip()
        self.category_maps = dict((k, dict((str(t), float(x)) for t, x in m.items()))
                                  for k, m in (category_maps or {}).items())
        self.categorical = list(categorical)
        for k in self.category_maps:
            if k not in self.categorical:
                self.categorical.append(k)

def _same_token(a, b):
    if a == b:
        return True
    try:
        return float(a) == float(b)
    except ValueError:
        return False

def _map_target(raw, cfg):
    """Map raw target tokens onto {0, 1}: the positive label becomes 1 and the
    single other observed value becomes 0. A column already coded 0/1 that
    never shows the positive label (as ``write_csv`` leaves it) is taken as is."""
    name = cfg.target_name
    blank = (raw == '') | raw.isin(cfg.invalid_sentinels)
    if blank.any():
        row = int(np.flatnonzero(blank.values)[0])
        raise NonBinaryTarget("target column '%s' has a missing value at data row %d" % (name, row + 1))
    distinct = sorted(set(raw))
    positive = [t for t in distinct if _same_token(t, cfg.positive_label)]
    if not positive and distinct and all(_is_number(t) and float(t) in (0.0, 1.0) for t in distinct):
        return raw.astype(np.float64).values
    others = [t for t in distinct if t not in positive]
    if len(set(float(t) if _is_number(t) else t for t in others)) > 1 or not distinct:
        raise NonBinaryTarget("target column '%s' has values outside {0,1} after mapping: %s"
                              % (name, ', '.join(distinct[:10])))
    return raw.isin(positive).values.astype(np.float64)

def _is_number(token):
    try:
        float(token)
        return True
    except ValueError:
        return False

def load_csv(path, cfg, require_target=True):
    """Load a CSV file into a Frame. Every cell becomes a finite float or NaN;
    sentinel and unparseable tokens become NaN."""
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False, na_filter=False,
                          encoding='utf-8', skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise EmptyFile("%s: file is empty" % path)
    except (IOError, OSError) as e:
        raise DataError("%s: %s" % (path, e))
    except UnicodeDecodeError as e:
        raise DataError("%s: not UTF-8 text: %s" % (path, e))
    except pd.errors.ParserError as e:
        raise DataError("%s: %s" % (path, e))
    if raw.shape[0] == 0:
        raise EmptyFile("%s: file has a header but no rows" % path)
    raw.columns = [str(c).strip() for c in raw.columns]
    if cfg.target_name is not None and cfg.target_name not in raw.columns:
        if require_target:
            raise MissingTargetColumn("%s: target column '%s' not present" % (path, cfg.target_name))
    has_target = cfg.target_name is not None and cfg.target_name in raw.columns

    columns = []
    levels = {}
    for name in raw.columns:
        tokens = raw[name].str.strip()
        if has_target and name == cfg.target_name:
            columns.append((name, _map_target(tokens, cfg)))
            continue
        missing = (tokens == '') | tokens.isin(cfg.invalid_sentinels)
        if name in cfg.categorical:
            if name in cfg.category_maps:
                values = tokens.map(cfg.category_maps[name]).astype(np.float64)
            else:
                levels[name] = sorted(set(tokens[~missing]))
                code = dict((t, float(i)) for i, t in enumerate(levels[name]))
                values = tokens.map(code).astype(np.float64)
        else:
            values = pd.to_numeric(tokens, errors='coerce').astype(np.float64)
        values = np.array(values.where(~missing), dtype=np.float64)
        values[~np.isfinite(values)] = np.nan
        columns.append((name, values))
    frame = Frame(columns, cfg.target_name if has_target else None, levels)
    log.debug("loaded %s: %d rows, %d columns", path, frame.n_rows, len(frame.names))
    return frame

def write_csv(frame, path):
    """Write a frame back out, missing cells as empty, 17 significant digits"""
    frame.to_pandas().to_csv(path, index=False, na_rep='', float_format='%.17g', encoding='utf-8')
