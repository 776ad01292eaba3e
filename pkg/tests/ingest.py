from __future__ import absolute_import, print_function
import unittest, os, io, shutil, tempfile

import numpy as np

def write_text(directory, name, text):
    path = os.path.join(directory, name)
    with io.open(path, 'w', encoding='utf-8') as f:
        f.write(text)
    return path

class runner(object):
    target = 'BAD'
    sentinels = ()
    positive_label = '1'
    categorical = ()
    category_maps = None
    error = None

    def setUp(self):
        self.tmp = tempfile.mkdtemp(prefix='hybridlr_ingest_')

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def runTest(self):
        from hybridlr.ingest import IngestConfig, load_csv
        path = write_text(self.tmp, 'input.csv', self.input)
        cfg = IngestConfig(self.target, self.sentinels, self.positive_label, self.categorical,
                           self.category_maps)
        if self.error is not None:
            from hybridlr import parser
            with self.assertRaises(getattr(parser, self.error)):
                load_csv(path, cfg)
            return
        frame = load_csv(path, cfg)
        self.assertEqual(frame.names, list(self.output.keys()))
        for name, expected in self.output.items():
            np.testing.assert_array_equal(frame.column(name), np.array(expected, dtype=np.float64))
        for name, levels in getattr(self, 'levels', {}).items():
            self.assertEqual(frame.levels[name], levels)

class sentinel_and_blank_cells(runner, unittest.TestCase):
    input = 'LOAN,DEBTINC,BAD\n1100,?,1\n1300, ,0\n1500,37.5,1\n'
    sentinels = ('?',)
    output = {'LOAN': [1100, 1300, 1500], 'DEBTINC': [np.nan, np.nan, 37.5], 'BAD': [1, 0, 1]}

class unparseable_tokens_become_missing(runner, unittest.TestCase):
    input = 'A,B,BAD\nabc,1e3,0\n2.5,inf,1\n'
    output = {'A': [np.nan, 2.5], 'B': [1000.0, np.nan], 'BAD': [0, 1]}

class text_target_mapped_by_positive_label(runner, unittest.TestCase):
    input = 'X,BAD\n1,Y\n2,N\n3,Y\n'
    positive_label = 'Y'
    output = {'X': [1, 2, 3], 'BAD': [1, 0, 1]}

class numeric_positive_label_matches_spelling(runner, unittest.TestCase):
    input = 'X,BAD\n1,1.0\n2,0\n'
    output = {'X': [1, 2], 'BAD': [1, 0]}

class categorical_coded_alphabetically(runner, unittest.TestCase):
    input = 'JOB,BAD\nSelf,1\nMgr,0\n,1\nOffice,0\nMgr,1\n'
    categorical = ('JOB',)
    output = {'JOB': [2, 0, np.nan, 1, 0], 'BAD': [1, 0, 1, 0, 1]}
    levels = {'JOB': ['Mgr', 'Office', 'Self']}

class categorical_explicit_map(runner, unittest.TestCase):
    input = 'REASON,BAD\nHomeImp,1\nDebtCon,0\nOther,0\n'
    category_maps = {'REASON': {'DebtCon': 0, 'HomeImp': 1}}
    output = {'REASON': [1, 0, np.nan], 'BAD': [1, 0, 0]}

class missing_target_column(runner, unittest.TestCase):
    input = 'A,B\n1,2\n'
    error = 'MissingTargetColumn'

class target_with_three_values(runner, unittest.TestCase):
    input = 'A,BAD\n1,0\n2,1\n3,2\n'
    error = 'NonBinaryTarget'

class target_with_missing_value(runner, unittest.TestCase):
    input = 'A,BAD\n1,0\n2,?\n'
    sentinels = ('?',)
    error = 'NonBinaryTarget'

class already_coded_target_with_text_label(runner, unittest.TestCase):
    input = 'A,BAD\n1,0\n2,1\n3,0\n'
    positive_label = 'Y'
    output = {'A': [1, 2, 3], 'BAD': [0, 1, 0]}

class header_only_file(runner, unittest.TestCase):
    input = 'A,BAD\n'
    error = 'EmptyFile'

class empty_file(runner, unittest.TestCase):
    input = ''
    error = 'EmptyFile'

class frame_operations(unittest.TestCase):
    def runTest(self):
        from hybridlr.ingest import Frame
        from hybridlr.parser import DataError, UnknownVariable, NonBinaryTarget
        f = Frame([('a', [1.0, 2.0, 3.0]), ('b', [4.0, np.nan, 6.0]), ('y', [1, 0, 1])], 'y')
        self.assertEqual(f.variables, ['a', 'b'])
        self.assertEqual(len(f), 3)
        np.testing.assert_array_equal(f.take([2, 0]).column('a'), [3.0, 1.0])
        self.assertEqual(f.select(['b']).names, ['b', 'y'])
        self.assertEqual(f.matrix(['a', 'b']).shape, (3, 2))
        self.assertEqual(f.matrix([]).shape, (3, 0))
        g = f.with_columns([('c', [0.0, 0.0, 1.0])])
        self.assertEqual(g.names, ['a', 'b', 'y', 'c'])
        self.assertTrue(f.equals(f.take([0, 1, 2])))
        self.assertFalse(f.equals(g))
        with self.assertRaises(UnknownVariable):
            f.column('nope')
        with self.assertRaises(DataError):
            Frame([('a', [1.0]), ('a', [2.0])])
        with self.assertRaises(DataError):
            Frame([('a', [1.0, 2.0]), ('b', [1.0])])
        with self.assertRaises(NonBinaryTarget):
            Frame([('y', [0.0, 0.5])], 'y')

class csv_write_then_load(unittest.TestCase):
    def runTest(self):
        from hybridlr.ingest import Frame, IngestConfig, load_csv, write_csv
        tmp = tempfile.mkdtemp(prefix='hybridlr_ingest_')
        try:
            rng = np.random.default_rng(7)
            x = rng.standard_normal(50)
            x[[3, 17]] = np.nan
            f = Frame([('x', x), ('k', rng.integers(0, 5, 50)), ('BAD', rng.integers(0, 2, 50))], 'BAD')
            path = os.path.join(tmp, 'frame.csv')
            write_csv(f, path)
            g = load_csv(path, IngestConfig('BAD'))
            self.assertTrue(f.equals(g))
        finally:
            shutil.rmtree(tmp, ignore_errors=True)

class text_label_write_then_load(unittest.TestCase):
    def runTest(self):
        from hybridlr.ingest import IngestConfig, load_csv, write_csv
        tmp = tempfile.mkdtemp(prefix='hybridlr_ingest_')
        try:
            cfg = IngestConfig('y', ['?'], 'Y')
            f = load_csv(write_text(tmp, 'yn.csv', 'x,y\n1,Y\n?,N\n3,Y\n'), cfg)
            np.testing.assert_array_equal(f.target, [1.0, 0.0, 1.0])
            path = os.path.join(tmp, 'again.csv')
            write_csv(f, path)
            self.assertTrue(f.equals(load_csv(path, cfg)))
        finally:
            shutil.rmtree(tmp, ignore_errors=True)

class not_utf8(unittest.TestCase):
    def runTest(self):
        from hybridlr.ingest import IngestConfig, load_csv
        from hybridlr.parser import DataError
        tmp = tempfile.mkdtemp(prefix='hybridlr_ingest_')
        try:
            path = os.path.join(tmp, 'latin.csv')
            with io.open(path, 'wb') as f:
                f.write(b'A,BAD\n\xff\xfe,1\n2,0\n')
            with self.assertRaises(DataError) as ctx:
                load_csv(path, IngestConfig('BAD'))
            self.assertEqual(ctx.exception.exit_code, 2)
        finally:
            shutil.rmtree(tmp, ignore_errors=True)

class scoring_load_without_target(unittest.TestCase):
    def runTest(self):
        from hybridlr.ingest import IngestConfig, load_csv
        tmp = tempfile.mkdtemp(prefix='hybridlr_ingest_')
        try:
            path = write_text(tmp, 'score.csv', 'A,B\n1,2\n3,4\n')
            frame = load_csv(path, IngestConfig('BAD'), require_target=False)
            self.assertIsNone(frame.target_name)
            self.assertEqual(frame.variables, ['A', 'B'])
        finally:
            shutil.rmtree(tmp, ignore_errors=True)
