#!/usr/bin/python
# hybridlr two-stage scoring pipeline
# Started: Oct 2026
#
# Stage one screens every pair of preprocessed variables for an interaction,
# trains a tiny network on each of the strongest pairs, and keeps one network
# output per cluster of similar outputs as a new feature. Stage two runs
# stepwise logistic regression over the original plus new features, prunes by
# VIF and coefficient sign, then walks a reduction path down to one feature.
# The one-stage baseline is stage two over the original features only.

from __future__ import print_function, absolute_import, division

import time, itertools, logging
from collections import OrderedDict

import numpy as np
from joblib import Parallel, delayed

from hybridlr import ingest, prep, varclus, glm, tinynet, metrics
from hybridlr.parser import PipelineHooks, SingularInformation, NonFiniteLoss, AllNetsDiverged, \
    EmptyAfterPruning, NoCandidates, TooFewVariables, UnknownVariable

log = logging.getLogger(__name__)

__all__ = ['PairScore', 'StageOneResult', 'PathStep', 'ModelPath', 'PreparedData', 'RunResult',
           'Pipeline', 'enumerate_pairs', 'screen_interactions', 'select_top_n', 'build_stage_one',
           'run_stage_two', 'run_one_stage', 'feature_name']

FULL_MODEL = 'Full Model'

def feature_name(index):
    """Column name of the stage-one network output for top pair ``index``"""
    return 'yhat_%d' % index

# ------------------------------------------------------------------
# Phase timings
#
# Wall clock seconds spent in each pipeline phase, for --time
# ------------------------------------------------------------------

class PhaseTime(object):
    def __init__(self, phase):
        self.phase = phase
        self.elapsed = 0.0

# -----------------------------------------------------------------------------
# Stage one
# -----------------------------------------------------------------------------

class PairScore(object):
    """Interaction screen result for one pair, a < b by name"""
    def __init__(self, pair, wald, p, converged, separated=False, error=None):
        self.pair = tuple(pair)
        self.wald = float(wald)
        self.p = float(p)
        self.converged = converged
        self.separated = separated
        self.error = error

    def to_dict(self):
        return {'pair': list(self.pair), 'wald': self.wald, 'p': self.p, 'converged': self.converged,
                'separated': self.separated, 'error': self.error}

    @classmethod
    def from_dict(cls, d):
        return cls(d['pair'], d['wald'], d['p'], d['converged'], d['separated'], d['error'])

    def __repr__(self):
        return "PairScore(%s, wald=%.4f%s)" % ('*'.join(self.pair), self.wald,
                                              '' if self.converged else ', excluded')

def enumerate_pairs(variables):
    """Every unordered pair of distinct variables in lexicographic order.

    >>> enumerate_pairs(['b', 'a', 'c'])
    [('a', 'b'), ('a', 'c'), ('b', 'c')]
    """
    names = sorted(set(variables))
    if len(names) < 2:
        raise TooFewVariables("pair enumeration needs at least two variables, got %d" % len(names))
    return list(itertools.combinations(names, 2))

def _score_pair(pair, x_a, x_b, y, opts):
    try:
        model, wald, p = glm.fit_interaction_pair(x_a, x_b, y, pair, opts)
    except SingularInformation as e:
        return PairScore(pair, 0.0, 1.0, False, error=str(e))
    return PairScore(pair, wald, p, model.converged and not model.separated, model.separated)

def screen_interactions(train, pairs, workers=1, opts=None):
    """Fit [1, a, b, a*b] for every pair. Results come back in ``pairs`` order
    whatever the worker count; failed fits are kept with wald 0."""
    y = train.target
    for a, b in pairs:
        if a not in train or b not in train:
            raise UnknownVariable("pair %s*%s not present in training frame" % (a, b))
    return Parallel(n_jobs=workers)(
        delayed(_score_pair)(pair, train.column(pair[0]), train.column(pair[1]), y, opts) for pair in pairs)

def select_top_n(scores, n):
    """Pairs of the ``n`` largest wald among converged screens, ties by pair
    order. Fewer come back when fewer converged."""
    if n < 1:
        raise ValueError("n must be at least 1")
    ranked = sorted((s for s in scores if s.converged), key=lambda s: (-s.wald, s.pair))
    return [s.pair for s in ranked[:n]]

# ------------------------------------------------------------------
# StageOneResult object
#
#    .scored_pairs  - PairScore per screened pair, pair order
#    .top_pairs     - The selected pairs, strongest first
#    .nets          - OrderedDict top pair index -> TinyNet, diverged omitted
#    .train_reports - OrderedDict top pair index -> TrainReport
#    .new_features  - Representative output columns, index order
#    .cluster_model - ClusterModel over the usable output columns
#    .cluster_report - RepresentativeReport for those columns
#    .warnings      - (where, message) for anything dropped on the way
#    .train, .valid - Input frames with the new features appended
# ------------------------------------------------------------------

class StageOneResult(object):
    def __init__(self, scored_pairs, top_pairs, nets, train_reports, new_features, cluster_model,
                 cluster_report, warnings=(), train=None, valid=None):
        self.scored_pairs = list(scored_pairs)
        self.top_pairs = list(top_pairs)
        self.nets = OrderedDict(nets)
        self.train_reports = OrderedDict(train_reports)
        self.new_features = list(new_features)
        self.cluster_model = cluster_model
        self.cluster_report = cluster_report
        self.warnings = list(warnings)
        self.train = train
        self.valid = valid

    def net_for(self, feature):
        """The network whose output column is ``feature``"""
        for index, net in self.nets.items():
            if feature_name(index) == feature:
                return net
        raise UnknownVariable("no stage-one network produces '%s'" % feature)

    def feature_nets(self):
        return OrderedDict((f, self.net_for(f)) for f in self.new_features)

def _train_pair(index, pair, X, y, seed, grid, max_iters, hidden):
    try:
        return tinynet.train(X, y, [seed, index], grid, max_iters, hidden, pair)
    except NonFiniteLoss:
        return None

def build_stage_one(train, valid, n, min_explained=0.9, seed=0, grid=tinynet.DEFAULT_GRID,
                    max_iters=tinynet.MAX_ITERS, hidden=1, workers=1, opts=None, progress=None,
                    max_eigen2=0.0):
    """Screen, select, train and cluster; see the module comment.

    Each network's initial weights come from the seed sequence (seed, pair
    index), so the worker count cannot change the result.
    """
    warnings = []
    pairs = enumerate_pairs(train.variables)
    scored = screen_interactions(train, pairs, workers, opts)
    if progress is not None:
        progress('screen', len(scored), len(pairs))
    excluded = sum(1 for s in scored if not s.converged)
    if excluded:
        warnings.append(('screen', "%d of %d pairs failed to fit cleanly and were excluded" % (excluded, len(pairs))))
    top = select_top_n(scored, n)
    if len(top) < n:
        warnings.append(('screen', "only %d usable pairs for top %d" % (len(top), n)))
    if not top:
        raise AllNetsDiverged("no screened pair converged")

    y = train.target
    trained = Parallel(n_jobs=workers)(
        delayed(_train_pair)(k, pair, train.matrix(list(pair)), y, seed, grid, max_iters, hidden)
        for k, pair in enumerate(top))
    nets = OrderedDict()
    reports = OrderedDict()
    for k, (pair, result) in enumerate(zip(top, trained)):
        if result is None:
            warnings.append(('stage one', "network for %s diverged at every learning rate" % '*'.join(pair)))
            continue
        nets[k], reports[k] = result
    if progress is not None:
        progress('networks', len(nets), len(top))
    if not nets:
        raise AllNetsDiverged("every stage-one network diverged")

    outputs = OrderedDict()
    for k, net in nets.items():
        name, values = tinynet.predict_column(net, train, feature_name(k))
        if np.ptp(values) > 0:
            outputs[name] = values
        else:
            warnings.append(('stage one', "%s output is constant on train and was dropped" % name))
    if not outputs:
        raise AllNetsDiverged("no stage-one network produced a non-constant output")

    names = list(outputs.keys())
    data = np.column_stack(list(outputs.values()))
    model = varclus.cluster_variables(data, names, min_explained, max_eigen2)
    report = varclus.select_representatives(model, data)
    chosen = set(report.representatives)
    new_features = [f for f in names if f in chosen]
    log.debug("stage one: %d pairs, %d nets, %d clusters, new features %s", len(pairs), len(nets),
              len(model.clusters), ', '.join(new_features))

    result = StageOneResult(scored, top, nets, reports, new_features, model, report, warnings)
    result.train = append_features(result, train)
    result.valid = append_features(result, valid)
    return result

def append_features(stage_one, frame):
    """The frame with every new stage-one feature appended, computed by the
    frozen networks"""
    columns = [tinynet.predict_column(stage_one.net_for(f), frame, f) for f in stage_one.new_features]
    return frame.with_columns(columns)

# -----------------------------------------------------------------------------
# Stage two
# -----------------------------------------------------------------------------

class PathStep(object):
    """One fitted model on the reduction path with its train and valid scores"""
    def __init__(self, index, model, train_scores, valid_scores, flags=()):
        self.index = index
        self.model = model
        self.train_scores = train_scores
        self.valid_scores = valid_scores
        self.flags = list(flags)

    @property
    def n_features(self):
        return len(self.model.terms)

    def to_dict(self):
        return {'index': self.index, 'model': self.model.to_dict(), 'train': self.train_scores.to_dict(),
                'valid': self.valid_scores.to_dict(), 'flags': self.flags}

    @classmethod
    def from_dict(cls, d):
        return cls(d['index'], glm.LogisticModel.from_dict(d['model']), metrics.Scores.from_dict(d['train']),
                   metrics.Scores.from_dict(d['valid']), d['flags'])

# ------------------------------------------------------------------
# ModelPath object
#
#    .full        - PathStep of the all-candidate model, or None if it
#                   could not be fitted
#    .steps       - Base model then one step per removed variable
#    .entered     - Stepwise trace of ('enter'|'remove', name, p)
#    .vif_dropped - (name, vif) in removal order
#    .sign_dropped - Names removed for a negative coefficient
#    .warnings    - (where, message)
# ------------------------------------------------------------------

class ModelPath(object):
    def __init__(self, full, steps, entered=(), vif_dropped=(), sign_dropped=(), warnings=()):
        self.full = full
        self.steps = list(steps)
        self.entered = [tuple(e) for e in entered]
        self.vif_dropped = [tuple(v) for v in vif_dropped]
        self.sign_dropped = list(sign_dropped)
        self.warnings = [tuple(w) for w in warnings]

    @property
    def base(self):
        return self.steps[0].model

    def rows(self):
        """Full model (if fitted) then every path step"""
        return ([self.full] if self.full is not None else []) + self.steps

    def step_with(self, n_features):
        for s in self.steps:
            if s.n_features == n_features:
                return s
        return None

    def to_dict(self):
        return {'full': None if self.full is None else self.full.to_dict(),
                'steps': [s.to_dict() for s in self.steps], 'entered': self.entered,
                'vif_dropped': self.vif_dropped, 'sign_dropped': self.sign_dropped,
                'warnings': self.warnings}

    @classmethod
    def from_dict(cls, d):
        full = None if d['full'] is None else PathStep.from_dict(d['full'])
        return cls(full, [PathStep.from_dict(s) for s in d['steps']], d['entered'], d['vif_dropped'],
                   d['sign_dropped'], d['warnings'])

def _model_flags(model):
    flags = []
    if not model.converged:
        flags.append('not converged')
    if model.separated:
        flags.append('quasi-separation')
    if model.ridge_used:
        flags.append('ridge')
    return flags

def run_stage_two(train, valid, candidates, config):
    """Stepwise selection, VIF pruning, sign pruning and the reduction path.

    ``config`` supplies alpha_enter, alpha_stay, vif_threshold and
    accuracy_threshold. Variables removed by VIF or sign are not offered to
    stepwise again.
    """
    candidates = list(candidates)
    if not candidates:
        raise NoCandidates("stage two needs at least one candidate")
    for name in candidates:
        if name not in train or name not in valid:
            raise UnknownVariable("candidate '%s' missing from train or valid" % name)
    y = train.target
    threshold = config.accuracy_threshold
    warnings = []

    def fit(terms, ridge_on_singular=False):
        return glm.fit_logistic(train.matrix(terms), y, terms, glm.FitOptions(ridge_on_singular=ridge_on_singular))

    def step(index, model):
        flags = _model_flags(model)
        for flag in flags:
            warnings.append(('model %s' % index, "%d features: %s" % (len(model.terms), flag)))
        return PathStep(index, model,
                        metrics.evaluate(model.predict_frame(train), y, threshold),
                        metrics.evaluate(model.predict_frame(valid), valid.target, threshold), flags)

    try:
        full = step(FULL_MODEL, fit(candidates, ridge_on_singular=True))
    except SingularInformation as e:
        full = None
        warnings.append((FULL_MODEL, "could not be fitted: %s" % e))

    entered = []
    model = glm.stepwise_select(train.matrix(candidates), y, candidates, config.alpha_enter,
                                config.alpha_stay, trace=entered.append)
    if not model.terms:
        raise EmptyAfterPruning("stepwise selection entered no variable")

    vif_dropped = []
    while len(model.terms) >= 2:
        values = glm.vif(train.matrix(model.terms), model.terms)
        worst, value = sorted(zip(model.terms, values), key=lambda tv: (-tv[1], tv[0]))[0]
        if value <= config.vif_threshold:
            break
        vif_dropped.append((worst, float(value)))
        model = fit([t for t in model.terms if t != worst])

    sign_dropped = []

    def prune_signs(model):
        while True:
            negative = [t for t in model.terms if model.coef(t) < 0]
            if not negative:
                return model
            sign_dropped.extend(negative)
            kept = [t for t in model.terms if t not in negative]
            if not kept:
                raise EmptyAfterPruning("every remaining variable has a negative coefficient: %s"
                                        % ', '.join(negative))
            model = fit(kept)

    model = prune_signs(model)
    steps = [step(1, model)]
    while len(model.terms) > 1:
        weakest = min(model.terms, key=lambda t: (model.wald(t), t))
        model = fit([t for t in model.terms if t != weakest])
        try:
            model = prune_signs(model)
        except EmptyAfterPruning:
            break
        steps.append(step(len(steps) + 1, model))
    log.debug("stage two: %d candidates, base %d features, %d path steps", len(candidates),
              steps[0].n_features, len(steps))
    return ModelPath(full, steps, entered, vif_dropped, sign_dropped, warnings)

def run_one_stage(train, valid, config):
    """Stage two over the preprocessed original features only"""
    return run_stage_two(train, valid, train.variables, config)

# -----------------------------------------------------------------------------
# Preprocessing result
# -----------------------------------------------------------------------------

class PreparedData(object):
    """Everything preprocessing learnt from the training rows, plus the encoded
    frames both stages start from"""
    def __init__(self, split, category_plan, impute_plan, kept, constant, reduction_report, encoder,
                 train, valid):
        self.split = split
        self.category_plan = category_plan
        self.impute_plan = impute_plan
        self.kept = kept
        self.constant = constant
        self.reduction_report = reduction_report
        self.encoder = encoder
        self.train = train
        self.valid = valid

    @property
    def variables(self):
        return self.encoder.variables

class RunResult(object):
    def __init__(self, prepared, stage_one, one_stage, two_stage):
        self.prepared = prepared
        self.stage_one = stage_one
        self.one_stage = one_stage
        self.two_stage = two_stage

# ------------------------------------------------------------------
# Pipeline object
#
# Runs preprocessing, both stages and the baseline from a PipelineConfig,
# reporting what it drops through the hooks.
# ------------------------------------------------------------------

class Pipeline(PipelineHooks):
    def __init__(self, config):
        super(Pipeline, self).__init__()
        self.config = config
        self.phase_times = []   # list of PhaseTime

    def timed(self, phase, func, *args, **kwargs):
        entry = PhaseTime(phase)
        self.phase_times.append(entry)
        begin = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            entry.elapsed = time.perf_counter() - begin

    def ingest_config(self, category_maps=None, with_target=True):
        cfg = self.config
        maps = dict(cfg.category_maps)
        maps.update(category_maps or {})
        return ingest.IngestConfig(cfg.target if with_target else None, cfg.sentinels, cfg.positive_label,
                                   cfg.categorical, maps)

    def load(self, path=None):
        return self.timed('load', ingest.load_csv, path or self.config.input, self.ingest_config())

    def prepare(self, frame):
        cfg = self.config
        frame = frame.select([n for n in frame.names if n != cfg.id_column])
        split = prep.stratified_split(frame, cfg.split_fraction, cfg.seed)
        category_plan = prep.fit_categories(split.train)
        train = prep.apply_categories(category_plan, split.train)
        valid = prep.apply_categories(category_plan, split.valid)

        impute_plan = prep.fit_impute(train)
        for name in impute_plan.dropped:
            self.on_warning('impute', "variable '%s' has no observed training values, dropped" % name)
        train = prep.apply_impute(impute_plan, train)
        valid = prep.apply_impute(impute_plan, valid)

        report = None
        if cfg.prep_clustering:
            kept, constant, report = prep.reduce_variables(train, cfg.prep_min_explained, cfg.max_eigen2)
        else:
            constant = []
            kept = train.variables
        for name in constant:
            self.on_warning('reduce', "variable '%s' is constant on train, dropped" % name)

        encoder = prep.fit_woe(train, cfg.n_bins, cfg.woe_smoothing, kept)
        for name in encoder.dropped:
            self.on_warning('woe', "variable '%s' is constant on train, dropped" % name)
        if not encoder.variables:
            raise NoCandidates("no variable survived preprocessing")
        log.info("prepared %d train / %d valid rows, %d variables", train.n_rows, valid.n_rows,
                 len(encoder.variables))
        return PreparedData(split, category_plan, impute_plan, kept, constant, report, encoder,
                            prep.apply_woe(encoder, train), prep.apply_woe(encoder, valid))

    def stage_one(self, prepared):
        cfg = self.config
        result = build_stage_one(prepared.train, prepared.valid, cfg.top_n, cfg.min_explained, cfg.seed,
                                 cfg.learning_rates, cfg.max_iters, cfg.hidden_nodes, cfg.workers,
                                 progress=self.on_progress, max_eigen2=cfg.max_eigen2)
        for where, msg in result.warnings:
            self.on_warning(where, msg)
        return result

    def model_path(self, train, valid, candidates, name):
        path = run_stage_two(train, valid, candidates, self.config)
        for where, msg in path.warnings:
            self.on_warning('%s %s' % (name, where), msg)
        return path

    def run(self, frame=None):
        if frame is None:
            frame = self.load()
        prepared = self.timed('preprocess', self.prepare, frame)
        one = self.timed('one-stage', self.model_path, prepared.train, prepared.valid,
                         prepared.variables, 'one-stage')
        stage_one = self.timed('stage one', self.stage_one, prepared)
        two = self.timed('two-stage', self.model_path, stage_one.train, stage_one.valid,
                         prepared.variables + stage_one.new_features, 'two-stage')
        return RunResult(prepared, stage_one, one, two)
