#!/usr/bin/python
# hybridlr model file and report tables
# Started: Oct 2026
#
# The model file is a single JSON document holding everything scoring needs:
# category maps, the imputation plan, the WOE binnings, the stage-one networks
# behind every new feature and both model paths. Floats are written with
# Python's shortest round-trip repr so reloading gives back identical values.

from __future__ import print_function, absolute_import, division

import os, io, json, logging
from collections import OrderedDict

import numpy as np
import pandas as pd

from hybridlr import prep, tinynet, metrics
from hybridlr.parser import SchemaMismatch, UnknownVariable, DataError
from hybridlr.varclus import RepresentativeReport
from hybridlr.stager import ModelPath, PairScore, FULL_MODEL

log = logging.getLogger(__name__)

__all__ = ['ModelArtifact', 'FORMAT_VERSION', 'feature_label', 'path_table', 'coefficient_table',
           'comparison_table', 'pair_table', 'network_table', 'to_markdown', 'write_reports']

FORMAT_VERSION = 1

# JSON has no inf or nan; such floats are stored as {"$float": "inf"}
NONFINITE_KEY = '$float'

def _json_safe(obj):
    if isinstance(obj, float):
        return obj if np.isfinite(obj) else OrderedDict([(NONFINITE_KEY, repr(float(obj)))])
    if isinstance(obj, dict):
        return OrderedDict((k, _json_safe(v)) for k, v in obj.items())
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj

def _json_pairs(pairs):
    if len(pairs) == 1 and pairs[0][0] == NONFINITE_KEY:
        return float(pairs[0][1])
    return OrderedDict(pairs)

PATH_COLUMNS = ['Model Index', '# of Features', 'Acc. on Train', 'Acc. on Valid', 'AUC on Train',
                'AUC on Valid', 'KS on Train', 'KS on Valid']
COEF_COLUMNS = ['Feature Code', 'Estimate', 'p Value', 'Feature Label']

# ------------------------------------------------------------------
# ModelArtifact object
#
#    .config        - Config snapshot (plain dict)
#    .category_maps - Column -> OrderedDict(token -> ordinal)
#    .impute_plan   - ImputePlan
#    .encoder       - WoeEncoder over the kept variables
#    .networks      - OrderedDict new feature -> TinyNet
#    .stage_one     - Screen, train and cluster details for reports
#    .paths         - {'one': ModelPath, 'two': ModelPath}
# ------------------------------------------------------------------

class ModelArtifact(object):
    def __init__(self, config, category_maps, impute_plan, encoder, networks, paths, stage_one=None,
                 reduction=None, version=FORMAT_VERSION):
        self.config = config
        self.category_maps = OrderedDict(category_maps)
        self.impute_plan = impute_plan
        self.encoder = encoder
        self.networks = OrderedDict(networks)
        self.paths = paths
        self.stage_one = stage_one or {}
        self.reduction = reduction
        self.version = version

    @classmethod
    def from_run(cls, config, result):
        maps = OrderedDict(sorted(config.category_maps.items()))
        maps.update(result.prepared.category_plan.maps)
        s1 = result.stage_one
        stage_one = {
            'scored_pairs': [s.to_dict() for s in s1.scored_pairs],
            'top_pairs': [list(p) for p in s1.top_pairs],
            'train_reports': [(k, r.to_dict()) for k, r in s1.train_reports.items()],
            'nets': [(k, n.to_dict()) for k, n in s1.nets.items()],
            'clusters': s1.cluster_report.to_dict(),
        }
        reduction = None
        if result.prepared.reduction_report is not None:
            reduction = result.prepared.reduction_report.to_dict()
        return cls(config.snapshot(), maps, result.prepared.impute_plan, result.prepared.encoder,
                   s1.feature_nets(), {'one': result.one_stage, 'two': result.two_stage}, stage_one, reduction)

    @property
    def target(self):
        return self.config.get('target')

    @property
    def input_variables(self):
        """Raw columns scoring reads"""
        return self.impute_plan.variables

    def labels(self):
        return dict(self.config.get('labels', {}))

    def to_dict(self):
        return OrderedDict([
            ('version', self.version),
            ('config', self.config),
            ('category_maps', [(k, list(v.items())) for k, v in self.category_maps.items()]),
            ('impute', self.impute_plan.to_dict()),
            ('woe', self.encoder.to_dict()),
            ('networks', [(f, n.to_dict()) for f, n in self.networks.items()]),
            ('stage_one', self.stage_one),
            ('reduction', self.reduction),
            ('paths', OrderedDict((k, p.to_dict()) for k, p in sorted(self.paths.items()))),
        ])

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SchemaMismatch("model file is not a JSON object")
        if d.get('version') != FORMAT_VERSION:
            raise SchemaMismatch("model file version %r, expected %d" % (d.get('version'), FORMAT_VERSION))
        try:
            maps = OrderedDict((k, OrderedDict((t, float(x)) for t, x in v)) for k, v in d['category_maps'])
            networks = OrderedDict((f, tinynet.TinyNet.from_dict(n)) for f, n in d['networks'])
            paths = dict((k, ModelPath.from_dict(p)) for k, p in d['paths'].items())
            if sorted(paths) != ['one', 'two']:
                raise SchemaMismatch("model file needs the 'one' and 'two' paths, has: %s"
                                     % ', '.join(sorted(paths)))
            return cls(d['config'], maps, prep.ImputePlan.from_dict(d['impute']),
                       prep.WoeEncoder.from_dict(d['woe']), networks, paths, d['stage_one'], d['reduction'],
                       d['version'])
        except KeyError as e:
            raise SchemaMismatch("model file lacks key %s" % e)
        except (TypeError, ValueError, IndexError) as e:
            raise SchemaMismatch("model file is malformed: %s" % e)

    def save(self, path):
        with io.open(path, 'w', encoding='utf-8') as f:
            json.dump(_json_safe(self.to_dict()), f, indent=1, allow_nan=False)
            f.write(u'\n')

    @classmethod
    def load(cls, path):
        try:
            with io.open(path, 'r', encoding='utf-8') as f:
                d = json.load(f, object_pairs_hook=_json_pairs)
        except (IOError, OSError) as e:
            raise DataError("%s: %s" % (path, e))
        except ValueError as e:
            raise SchemaMismatch("%s: not a model file: %s" % (path, e))
        return cls.from_dict(d)

    def model(self, path='two', n_features=None):
        """Base model of a path, or the path step with ``n_features`` features"""
        if path not in self.paths:
            raise UnknownVariable("no model path '%s'" % path)
        p = self.paths[path]
        if n_features is None:
            return p.base
        step = p.step_with(n_features)
        if step is None:
            raise UnknownVariable("%s-stage path has no model with %d features" % (path, n_features))
        return step.model

    def check_schema(self, frame):
        """Raise SchemaMismatch for missing inputs; return the extra columns"""
        missing = [n for n in self.input_variables if n not in frame]
        if missing:
            raise SchemaMismatch("input lacks column(s) the model needs: %s" % ', '.join(missing))
        known = set(self.input_variables) | set([self.target, self.config.get('id_column')])
        return [n for n in frame.names if n not in known]

    def transform(self, frame):
        """Impute, WOE encode and append stage-one features. ``frame`` holds
        raw columns with categories already mapped to ordinals."""
        self.check_schema(frame)
        encoded = prep.apply_woe(self.encoder, prep.apply_impute(self.impute_plan, frame))
        columns = [tinynet.predict_column(net, encoded, f) for f, net in self.networks.items()]
        return encoded.with_columns(columns)

    def score(self, frame, path='two', n_features=None):
        model = self.model(path, n_features)
        return model.predict_frame(self.transform(frame))

# -----------------------------------------------------------------------------
# Report tables
# -----------------------------------------------------------------------------

def feature_label(name, labels=None, pairs=None):
    """Human readable label of a model term"""
    labels = labels or {}
    pairs = pairs or {}
    if name in labels:
        return labels[name]
    if name in pairs:
        return "Newly created feature using %s and %s" % tuple(pairs[name])
    if name.startswith(prep.INDICATOR_PREFIX):
        return "Missing indicator for %s" % name[len(prep.INDICATOR_PREFIX):]
    return name

def path_table(path, sizes=None):
    """Reduction path table, full model first. ``sizes``
    keeps only the path steps with those feature counts."""
    rows = []
    for s in path.rows():
        if sizes and s.index != FULL_MODEL and s.n_features not in sizes:
            continue
        rows.append([s.index, s.n_features, s.train_scores.accuracy, s.valid_scores.accuracy,
                     s.train_scores.auc, s.valid_scores.auc, s.train_scores.ks, s.valid_scores.ks])
    return pd.DataFrame(rows, columns=PATH_COLUMNS)

def coefficient_table(model, labels=None, pairs=None):
    rows = [['Intercept', model.intercept, float(model.p_value[0]), 'Model intercept']]
    for i, t in enumerate(model.terms):
        rows.append([t, float(model.beta[i + 1]), float(model.p_value[i + 1]), feature_label(t, labels, pairs)])
    return pd.DataFrame(rows, columns=COEF_COLUMNS)

def comparison_table(one, two):
    """Valid KS of both paths at every feature count present in both"""
    rows = []
    for s in two.steps:
        other = one.step_with(s.n_features)
        if other is not None:
            rows.append([s.n_features, other.valid_scores.ks, s.valid_scores.ks,
                         s.valid_scores.ks - other.valid_scores.ks])
    return pd.DataFrame(rows, columns=['# of Features', 'One-stage KS on Valid', 'Two-stage KS on Valid',
                                       'Difference'])

def pair_table(scored, top_pairs=()):
    rank = dict((tuple(p), i + 1) for i, p in enumerate(top_pairs))
    rows = [[s.pair[0], s.pair[1], s.wald, s.p, s.converged, rank.get(s.pair, '')] for s in scored]
    return pd.DataFrame(rows, columns=['Variable A', 'Variable B', 'Wald Chi-square', 'p Value',
                                       'Converged', 'Top Rank'])

def network_table(networks):
    rows = []
    for feature, net in networks.items():
        if net.hidden == 1:
            rows.append([feature, net.input_names[0], net.input_names[1], net.w1, net.w2, net.b1, net.v, net.b2])
    return pd.DataFrame(rows, columns=['Feature', 'Input 1', 'Input 2', 'w1', 'w2', 'b1', 'v', 'b2'])

def _cell(value, column):
    if isinstance(value, (bool, np.bool_)):
        return 'yes' if value else 'no'
    if isinstance(value, (float, np.floating)):
        if column == 'p Value' and value < 0.001:
            return '<0.001'
        return '%.3f' % value
    return str(value)

def to_markdown(df):
    """Aligned markdown table, three decimals"""
    header = [str(c) for c in df.columns]
    body = [[_cell(v, c) for v, c in zip(row, df.columns)] for row in df.itertuples(index=False)]
    widths = [max([len(h)] + [len(r[i]) for r in body]) for i, h in enumerate(header)]
    numeric = [df[c].dtype.kind in 'if' for c in df.columns]

    def line(cells):
        return '| ' + ' | '.join(c.rjust(w) if n else c.ljust(w)
                                 for c, w, n in zip(cells, widths, numeric)) + ' |'
    rule = '|' + '|'.join('-' * (w + 1) + (':' if n else '-') for w, n in zip(widths, numeric)) + '|'
    return '\n'.join([line(header), rule] + [line(r) for r in body]) + '\n'

def _write(df, outdir, stem):
    df.to_csv(os.path.join(outdir, stem + '.csv'), index=False, float_format='%.17g')
    with io.open(os.path.join(outdir, stem + '.md'), 'w', encoding='utf-8') as f:
        f.write(to_markdown(df))

def write_reports(artifact, outdir, sizes=None, valid_frames=None):
    """Write path, coefficient, comparison and stage-one tables. With
    ``valid_frames`` mapping path key to the validation frame in that path's
    feature space, also the ROC points of each base model. Returns the written
    stems."""
    if not os.path.isdir(outdir):
        os.makedirs(outdir)
    labels = artifact.labels()
    pairs = OrderedDict((f, net.input_names) for f, net in artifact.networks.items())
    written = []
    for key, title in (('one', 'one_stage'), ('two', 'two_stage')):
        path = artifact.paths[key]
        _write(path_table(path, sizes), outdir, title + '_path')
        written.append(title + '_path')
        for s in path.rows():
            if sizes and s.index != FULL_MODEL and s.n_features not in sizes:
                continue
            stem = '%s_coef_%s' % (title, 'full' if s.index == FULL_MODEL else s.index)
            _write(coefficient_table(s.model, labels, pairs), outdir, stem)
            written.append(stem)
    _write(comparison_table(artifact.paths['one'], artifact.paths['two']), outdir, 'comparison')
    written.append('comparison')
    s1 = artifact.stage_one
    if s1:
        scored = [PairScore.from_dict(d) for d in s1['scored_pairs']]
        _write(pair_table(scored, s1['top_pairs']), outdir, 'pairs')
        RepresentativeReport.from_dict(s1['clusters']).to_csv(os.path.join(outdir, 'stage_one_clusters.csv'))
        _write(network_table(artifact.networks), outdir, 'networks')
        written += ['pairs', 'stage_one_clusters', 'networks']
    if artifact.reduction is not None:
        RepresentativeReport.from_dict(artifact.reduction).to_csv(os.path.join(outdir, 'prep_clusters.csv'))
        written.append('prep_clusters')
    if valid_frames is not None:
        for key, valid in sorted(valid_frames.items()):
            model = artifact.model(key)
            curve = metrics.roc(model.predict_frame(valid), valid.target)
            stem = '%s_stage_roc_valid' % key
            curve.to_csv(os.path.join(outdir, stem + '.csv'))
            written.append(stem)
    log.debug("wrote reports to %s: %s", outdir, ', '.join(written))
    return written
