#!/usr/bin/python
# hybridlr command line
# Started: Oct 2026

from __future__ import print_function, absolute_import, division

import sys, os, argparse, traceback, logging, io
from collections import OrderedDict
if __name__ == '__main__' and __package__ is None:
    sys.path.append( os.path.dirname( os.path.dirname( os.path.abspath(__file__) ) ) )

import pandas as pd

from hybridlr import ingest, synth, tinynet
from hybridlr.parser import parse_config, ConfigError, HybridError
from hybridlr.stager import Pipeline
from hybridlr.artifact import ModelArtifact, write_reports

version = '1.0'

__all__ = ['PipelineConfig', 'CmdPipeline', 'main', 'version']

log = logging.getLogger(__name__)

MODEL_FILE = 'model.json'
DEBUG_LOG = 'hybridlr_debug.log'

# -----------------------------------------------------------------------------
# Value converters for config keys
# -----------------------------------------------------------------------------

def _one(values):
    if len(values) != 1 or isinstance(values[0], tuple):
        raise ValueError("expected a single value")
    return values[0]

def _str(values):
    return _one(values)

def _opt_str(values):
    v = _one(values)
    return None if v.lower() in ('', 'none') else v

def _int(values):
    return int(_one(values))

def _float(values):
    return float(_one(values))

def _bool(values):
    v = _one(values).lower()
    if v in ('1', 'true', 'yes', 'on'):
        return True
    if v in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError("expected true or false")

def _list(values):
    if any(isinstance(v, tuple) for v in values):
        raise ValueError("expected plain values")
    return list(values)

def _floats(values):
    return [float(v) for v in _list(values)]

def _ints(values):
    return [int(v) for v in _list(values)]

# ------------------------------------------------------------------
# PipelineConfig object
#
# Every knob of a run with its default. map.<COL> and label.<COL> keys
# fill category_maps and labels.
# ------------------------------------------------------------------

class PipelineConfig(object):
    FIELDS = OrderedDict([
        ('input', (None, _str)),
        ('output', ('hybridlr_out', _str)),
        ('target', (None, _str)),
        ('positive_label', ('1', _str)),
        ('sentinels', ([], _list)),
        ('categorical', ([], _list)),
        ('id_column', (None, _opt_str)),
        ('split_fraction', (0.6, _float)),
        ('seed', (1, _int)),
        ('n_bins', (10, _int)),
        ('woe_smoothing', (0.5, _float)),
        ('prep_clustering', (True, _bool)),
        ('prep_min_explained', (0.9, _float)),
        ('min_explained', (0.9, _float)),
        ('max_eigen2', (0.0, _float)),
        ('top_n', (50, _int)),
        ('hidden_nodes', (1, _int)),
        ('learning_rates', (list(tinynet.DEFAULT_GRID), _floats)),
        ('max_iters', (tinynet.MAX_ITERS, _int)),
        ('alpha_enter', (0.15, _float)),
        ('alpha_stay', (0.15, _float)),
        ('vif_threshold', (10.0, _float)),
        ('accuracy_threshold', (0.5, _float)),
        ('workers', (1, _int)),
        ('report_sizes', ([], _ints)),
    ])

    def __init__(self, **overrides):
        self.lines = {}
        for name, (default, _) in self.FIELDS.items():
            setattr(self, name, list(default) if isinstance(default, list) else default)
        self.category_maps = OrderedDict()
        self.labels = OrderedDict()
        for name, value in overrides.items():
            if name not in self.FIELDS and name not in ('category_maps', 'labels'):
                raise ConfigError(name, "unknown key")
            setattr(self, name, value)

    @classmethod
    def from_text(cls, text):
        cfg = cls()
        cfg.apply_entries(parse_config(text))
        return cfg

    @classmethod
    def from_file(cls, path):
        try:
            with io.open(path, 'r', encoding='utf-8') as f:
                text = f.read()
        except (IOError, OSError) as e:
            raise ConfigError('config', str(e))
        cfg = cls.from_text(text)
        base = os.path.dirname(os.path.abspath(path))
        if cfg.input is not None and not os.path.isabs(cfg.input):
            cfg.input = os.path.join(base, cfg.input)
        return cfg

    def apply_entries(self, entries):
        for e in entries:
            self.set(e.key, e.values, e.lineno)

    def set(self, key, values, line=None, source='config'):
        """Set a key from its raw value list, as parsed from a config file"""
        if key.startswith('map.'):
            column = key[4:]
            if not column or not values or any(not isinstance(v, tuple) for v in values):
                raise ConfigError(key, "expected token:number pairs", line, source)
            try:
                self.category_maps[column] = OrderedDict((t, float(x)) for t, x in values)
            except ValueError as e:
                raise ConfigError(key, str(e), line, source)
            return
        if key.startswith('label.'):
            try:
                self.labels[key[6:]] = ', '.join(_list(values))
            except ValueError as e:
                raise ConfigError(key, str(e), line, source)
            return
        if key not in self.FIELDS:
            raise ConfigError(key, "unknown key", line, source)
        try:
            setattr(self, key, self.FIELDS[key][1](values))
        except ValueError as e:
            raise ConfigError(key, str(e), line, source)
        self.lines[key] = line

    def _fail(self, field, msg):
        raise ConfigError(field, msg, self.lines.get(field))

    def validate(self, require_input=True):
        if not self.target:
            self._fail('target', "must be set")
        if require_input and not self.input:
            self._fail('input', "must be set")
        if not 0.0 < self.split_fraction < 1.0:
            self._fail('split_fraction', "must be in (0,1), got %r" % self.split_fraction)
        if self.n_bins < 2:
            self._fail('n_bins', "must be at least 2")
        if self.woe_smoothing < 0:
            self._fail('woe_smoothing', "must be non-negative")
        for field in ('prep_min_explained', 'min_explained'):
            if not 0.0 < getattr(self, field) <= 1.0:
                self._fail(field, "must be in (0,1]")
        if self.max_eigen2 < 0.0:
            self._fail('max_eigen2', "must be non-negative")
        if self.top_n < 1:
            self._fail('top_n', "must be at least 1")
        if self.hidden_nodes < 1:
            self._fail('hidden_nodes', "must be at least 1")
        if not self.learning_rates or any(not tinynet.MIN_RATE <= r <= tinynet.MAX_RATE
                                          for r in self.learning_rates):
            self._fail('learning_rates', "must be in [%g, %g]" % (tinynet.MIN_RATE, tinynet.MAX_RATE))
        if not 1 <= self.max_iters <= tinynet.MAX_ITERS:
            self._fail('max_iters', "must be in [1, %d]" % tinynet.MAX_ITERS)
        for field in ('alpha_enter', 'alpha_stay'):
            if not 0.0 < getattr(self, field) < 1.0:
                self._fail(field, "must be in (0,1)")
        if self.vif_threshold < 1.0:
            self._fail('vif_threshold', "must be at least 1")
        if not 0.0 <= self.accuracy_threshold <= 1.0:
            self._fail('accuracy_threshold', "must be in [0,1]")
        if self.workers == 0 or self.workers < -1:
            self._fail('workers', "must be positive, or -1 for every core")
        if any(s < 1 for s in self.report_sizes):
            self._fail('report_sizes', "must be positive")
        for column in self.category_maps:
            if column not in self.categorical:
                self.categorical.append(column)
        return self

    # where and how fast a run happens, not what it computes
    RUN_FIELDS = ('output', 'workers')

    def snapshot(self):
        """Plain dict of every setting that shapes the model"""
        d = OrderedDict((name, getattr(self, name)) for name in self.FIELDS if name not in self.RUN_FIELDS)
        d['category_maps'] = OrderedDict((k, OrderedDict(v)) for k, v in self.category_maps.items())
        d['labels'] = OrderedDict(self.labels)
        return d

    @classmethod
    def from_snapshot(cls, d):
        cfg = cls()
        for name in cls.FIELDS:
            if name in d:
                setattr(cfg, name, d[name])
        cfg.category_maps = OrderedDict((k, OrderedDict(v)) for k, v in d.get('category_maps', {}).items())
        cfg.labels = OrderedDict(d.get('labels', {}))
        return cfg

class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(self.prog, message, source='command line')

class CmdPipeline(Pipeline):
    def __init__(self, argv):
        if len(argv) < 2:
            argv = [argv[0], '--help']
        argp = _ArgumentParser(prog='hybridlr',
            description=
    '''Two-stage hybrid credit scoring: tiny neural networks build pairwise features
    that augment a stepwise logistic regression, compared against the one-stage
    logistic baseline.''')
        argp.add_argument('--debug', dest = 'debug', action = 'store_true', help = 'Generate a %s file logging execution' % DEBUG_LOG)
        argp.add_argument('--time', dest = 'time', action = 'store_true', help = 'Print the time each phase took')
        argp.add_argument('--version', action='version', version='hybridlr ' + version)
        sub = argp.add_subparsers(dest = 'command', metavar = 'command')

        run = sub.add_parser('run', help = 'Run both pipelines from a config file and write reports and the model file')
        run.add_argument('config', metavar = 'config', help = 'Pipeline config file')
        run.add_argument('-i', '--input', dest = 'input', metavar = 'path', help = 'Input CSV, overrides the config')
        run.add_argument('-o', '--output', dest = 'output', metavar = 'dir', help = 'Output directory, overrides the config')
        run.add_argument('-s', '--set', dest = 'overrides', metavar = 'key=value', action = 'append', default = [], help = 'Override any config key')

        score = sub.add_parser('score', help = 'Score a CSV with a model file')
        score.add_argument('model', metavar = 'model', help = 'Model file written by run')
        score.add_argument('input', metavar = 'input', help = 'CSV to score')
        score.add_argument('-o', dest = 'output', metavar = 'path', default = None, help = 'Output CSV instead of stdout')
        score.add_argument('--path', dest = 'path', choices = ('one', 'two'), default = 'two', help = 'Model path to score with')
        score.add_argument('--features', dest = 'features', metavar = 'k', type = int, default = None, help = 'Use the path model with k features instead of the base model')

        syn = sub.add_parser('synth', help = 'Write synthetic data with a planted pairwise effect')
        syn.add_argument('output', metavar = 'path', help = 'Output CSV')
        syn.add_argument('--rows', dest = 'n_rows', type = int, default = 10000)
        syn.add_argument('--signal', dest = 'n_signal', type = int, default = 4)
        syn.add_argument('--noise', dest = 'n_noise', type = int, default = 4)
        syn.add_argument('--strength', dest = 'strength', type = float, default = 3.0)
        syn.add_argument('--event-rate', dest = 'event_rate', type = float, default = 0.8)
        syn.add_argument('--missing-rate', dest = 'missing_rate', type = float, default = 0.02)
        syn.add_argument('--seed', dest = 'seed', type = int, default = 0)

        rep = sub.add_parser('report', help = 'Re-render report tables from a model file')
        rep.add_argument('model', metavar = 'model', help = 'Model file written by run')
        rep.add_argument('-o', '--output', dest = 'output', metavar = 'dir', default = None, help = 'Output directory')
        rep.add_argument('--sizes', dest = 'sizes', metavar = 'k,k,...', default = None, help = 'Feature counts to keep in path tables')

        super(CmdPipeline, self).__init__(PipelineConfig())
        self.debug_handler = None
        try:
            self.args = argp.parse_args(argv[1:])
            if self.args.debug:
                self.debug_handler = logging.FileHandler(DEBUG_LOG, mode='w')
                self.debug_handler.setFormatter(logging.Formatter('%(asctime)s %(name)s %(levelname)s %(message)s'))
                root = logging.getLogger('hybridlr')
                root.setLevel(logging.DEBUG)
                root.addHandler(self.debug_handler)
            if self.args.command is None:
                raise ConfigError('hybridlr', "a command is required", source='command line')
            getattr(self, 'cmd_' + self.args.command)()
        except HybridError as e:
            self.on_error(self.args.command if hasattr(self, 'args') else 'hybridlr', str(e))
            self.return_code = e.exit_code
        except SystemExit:
            raise
        except:
            print(traceback.format_exc(), file = sys.stderr)
            print("\nINTERNAL ERROR, FATALLY EXITING NOW\n", file = sys.stderr)
            self.return_code = 99
        finally:
            if self.debug_handler is not None:
                logging.getLogger('hybridlr').removeHandler(self.debug_handler)
                self.debug_handler.close()

        if getattr(self, 'args', None) is not None and self.args.time and self.phase_times:
            print("\nTime report:")
            print("============")
            total = sum(t.elapsed for t in self.phase_times)
            for t in self.phase_times:
                print("%s: %f seconds (%f%%)" % (t.phase, t.elapsed, 100 * t.elapsed / total if total else 0.0))
            print()

    def cmd_run(self):
        cfg = PipelineConfig.from_file(self.args.config)
        for item in self.args.overrides:
            if '=' not in item:
                raise ConfigError(item, "expected key=value", source='command line')
            key, value = item.split('=', 1)
            cfg.set(key.strip(), _split_override(value), source='command line')
        if self.args.input:
            cfg.input = self.args.input
        if self.args.output:
            cfg.output = self.args.output
        self.config = cfg.validate()
        result = self.run()
        outdir = cfg.output
        if not os.path.isdir(outdir):
            os.makedirs(outdir)
        artifact = ModelArtifact.from_run(cfg, result)
        self.timed('write', self.write_outputs, artifact, result, outdir)
        print("hybridlr: one-stage base model %d features, two-stage base model %d features, reports in %s"
              % (len(result.one_stage.base.terms), len(result.two_stage.base.terms), outdir))

    def write_outputs(self, artifact, result, outdir):
        artifact.save(os.path.join(outdir, MODEL_FILE))
        sizes = self.config.report_sizes or None
        write_reports(artifact, outdir, sizes,
                      {'one': result.prepared.valid, 'two': result.stage_one.valid})
        encoder = result.prepared.encoder
        encoder.binning_table().to_csv(os.path.join(outdir, 'woe_bins.csv'), index=False, float_format='%.17g')
        pd.DataFrame(list(encoder.information_values().items()), columns=['variable', 'information_value']) \
            .to_csv(os.path.join(outdir, 'information_value.csv'), index=False, float_format='%.17g')

    def cmd_score(self):
        artifact = ModelArtifact.load(self.args.model)
        self.config = PipelineConfig.from_snapshot(artifact.config)
        cfg = self.config
        frame = self.timed('load', ingest.load_csv, self.args.input,
                           self.ingest_config(artifact.category_maps, with_target=False), require_target=False)
        for name in artifact.check_schema(frame):
            self.on_warning('score', "column '%s' is not used by the model and was ignored" % name)
        scores = self.timed('score', artifact.score, frame, self.args.path, self.args.features)
        out = OrderedDict()
        if cfg.id_column:
            ids = pd.read_csv(self.args.input, dtype=str, keep_default_na=False, skipinitialspace=True)
            ids.columns = [str(c).strip() for c in ids.columns]
            if cfg.id_column in ids.columns:
                out[cfg.id_column] = ids[cfg.id_column].values
        if not out:
            out['row'] = range(1, frame.n_rows + 1)
        out['p_hat'] = scores
        df = pd.DataFrame(out)
        if self.args.output:
            df.to_csv(self.args.output, index=False, float_format='%.17g')
        else:
            df.to_csv(sys.stdout, index=False, float_format='%.17g')

    def cmd_synth(self):
        a = self.args
        try:
            spec = synth.SynthSpec(a.n_rows, a.n_signal, a.n_noise, a.strength, a.event_rate,
                                   a.missing_rate, seed=a.seed)
        except ValueError as e:
            raise ConfigError('synth', str(e), source='command line')
        df = self.timed('synth', synth.write, spec, a.output)
        print("hybridlr: wrote %d rows, event rate %.4f, to %s" % (len(df), df[synth.TARGET].mean(), a.output))

    def cmd_report(self):
        artifact = ModelArtifact.load(self.args.model)
        outdir = self.args.output or os.path.dirname(os.path.abspath(self.args.model))
        sizes = None
        if self.args.sizes:
            try:
                sizes = [int(s) for s in self.args.sizes.split(',') if s.strip()]
            except ValueError:
                raise ConfigError('--sizes', "expected comma separated integers", source='command line')
        elif artifact.config.get('report_sizes'):
            sizes = artifact.config['report_sizes']
        written = self.timed('report', write_reports, artifact, outdir, sizes)
        print("hybridlr: wrote %d tables to %s" % (len(written), outdir))

def _split_override(value):
    """Raw value list of a --set value, parsed like a config line"""
    entries = parse_config('x = ' + value)
    return entries[0].values if entries else []

def main(argv=None):
    if argv is None:
        argv = sys.argv
    p = CmdPipeline(argv)
    return p.return_code

if __name__ == "__main__":
    sys.exit(main(sys.argv))
