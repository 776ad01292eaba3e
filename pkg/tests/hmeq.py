from __future__ import absolute_import, print_function
import unittest, os

import numpy as np

# The public home equity loan file; download it and point HMEQ_CSV at it
HMEQ_CSV = os.environ.get('HMEQ_CSV')

def hmeq_config(seed, **overrides):
    from hybridlr.hcmd import PipelineConfig
    settings = dict(input=HMEQ_CSV, target='BAD', categorical=['REASON', 'JOB'], top_n=6, seed=seed)
    settings.update(overrides)
    return PipelineConfig(**settings).validate()

def quiet_run(cfg):
    from hybridlr.stager import Pipeline
    p = Pipeline(cfg)
    p.on_warning = lambda where, msg: None
    return p.run()

@unittest.skipUnless(HMEQ_CSV, "set HMEQ_CSV to the home equity loan CSV")
class hmeq_layout(unittest.TestCase):
    def runTest(self):
        from hybridlr.stager import Pipeline
        p = Pipeline(hmeq_config(1))
        frame = p.load()
        self.assertEqual(frame.n_rows, 5960)
        self.assertEqual(len(frame.variables), 12)
        self.assertEqual(sorted(frame.levels), ['JOB', 'REASON'])
        result = p.run(frame)
        self.assertEqual(result.prepared.train.n_rows, 3577)
        self.assertEqual(len(result.stage_one.top_pairs), 6)
        self.assertGreaterEqual(len(result.stage_one.new_features), 1)

@unittest.skipUnless(HMEQ_CSV, "set HMEQ_CSV to the home equity loan CSV")
class hmeq_one_stage_full_model(unittest.TestCase):
    def runTest(self):
        aucs, kss = [], []
        for seed in range(1, 6):
            full = quiet_run(hmeq_config(seed)).one_stage.full
            self.assertIsNotNone(full)
            aucs.append(full.valid_scores.auc)
            kss.append(full.valid_scores.ks)
        self.assertAlmostEqual(float(np.median(aucs)), 0.792, delta=0.05)
        self.assertAlmostEqual(float(np.median(kss)), 0.443, delta=0.06)

@unittest.skipUnless(HMEQ_CSV, "set HMEQ_CSV to the home equity loan CSV")
class hmeq_two_stage_dominates(unittest.TestCase):
    def runTest(self):
        from hybridlr.artifact import comparison_table
        result = quiet_run(hmeq_config(1))
        table = comparison_table(result.one_stage, result.two_stage)
        sizes = (11, 9, 7, 5)
        shared = set(table['# of Features'])
        self.assertEqual([k for k in sizes if k not in shared], [],
                         "both paths need models of every size; shared sizes: %s" % sorted(shared))
        rows = table[table['# of Features'].isin(sizes)]
        wins = int((rows['Difference'] >= 0).sum())
        self.assertGreaterEqual(wins, len(sizes) - 1)

@unittest.skipUnless(HMEQ_CSV, "set HMEQ_CSV to the home equity loan CSV")
class hmeq_worker_count_invariant(unittest.TestCase):
    def runTest(self):
        import json
        from hybridlr.artifact import ModelArtifact
        dumps = []
        for workers in (1, 2):
            cfg = hmeq_config(1, workers=workers)
            dumps.append(json.dumps(ModelArtifact.from_run(cfg, quiet_run(cfg)).to_dict()))
        self.assertEqual(dumps[0], dumps[1])
