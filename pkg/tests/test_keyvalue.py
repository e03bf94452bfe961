import io
import math
import os
import shutil
import tempfile
import unittest

from spinpath import schema
from spinpath.errors import ValidationError


class LoadsTestCase(unittest.TestCase):

    def test_basic(self):
        text = '# run settings\nseed = 3\n\nvisibility = 0.5\n'
        self.assertEqual(schema.loads(text), {'seed': '3', 'visibility': '0.5'})

    def test_value_keeps_equals_sign(self):
        self.assertEqual(schema.loads('label = a=b'), {'label': 'a=b'})

    def test_degree_suffix(self):
        data = schema.loads('gammas_deg = 0, 30, 60')
        self.assertEqual(data, {'gammas': '0 deg, 30 deg, 60 deg'})

        class Scan(schema.Model):
            gammas = schema.ListField(of_type=schema.AngleField())

        gammas = Scan(data).gammas
        self.assertEqual(gammas, [0.0, math.radians(30), math.radians(60)])

    def test_radian_suffix(self):
        self.assertEqual(schema.loads('theta_rad = 0.25'), {'theta': '0.25 rad'})

    def test_missing_equals(self):
        self.assertRaises(ValidationError, schema.loads, 'seed 3')

    def test_missing_key(self):
        self.assertRaises(ValidationError, schema.loads, ' = 3')

    def test_duplicate_key(self):
        with self.assertRaises(ValidationError) as caught:
            schema.loads('seed = 1\nseed = 2\n')
        self.assertEqual(caught.exception.field, 'seed')


class DumpsTestCase(unittest.TestCase):

    def test_formats(self):
        text = schema.dumps({'flag': True, 'rate': 0.1, 'seed': 7,
                             'gammas': [0.0, 0.5], 'empty': None})
        self.assertEqual(text, 'flag = true\nrate = 0.1\nseed = 7\n'
                               'gammas = 0.0, 0.5\nempty = \n')

    def test_nested_mappings_flattened(self):
        text = schema.dumps({'kind': 'analytic', 'config': {'seed': 1}})
        self.assertEqual(text, 'kind = analytic\nseed = 1\n')

    def test_colliding_nested_key(self):
        self.assertRaises(ValidationError, schema.dumps,
                          {'seed': 1, 'config': {'seed': 2}})

    def test_float_round_trip_exact(self):
        values = [math.pi / 7, 1e-300, 2.0 ** 0.5, -0.1]
        loaded = schema.loads(schema.dumps({'values': values}))

        class Record(schema.Model):
            values = schema.ListField(of_type=schema.FloatField())

        self.assertEqual(list(Record(loaded).values), values)


class FileTestCase(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_dump_and_load(self):
        path = os.path.join(self.tmpdir, 'manifest')
        schema.dump({'kind': 'beam-block', 'seed': 11}, path)
        self.assertEqual(schema.load(path), {'kind': 'beam-block', 'seed': '11'})

    def test_lf_line_endings(self):
        path = os.path.join(self.tmpdir, 'manifest')
        schema.dump({'a': 1, 'b': 2}, path)
        with io.open(path, 'rb') as stream:
            self.assertEqual(stream.read(), b'a = 1\nb = 2\n')


if __name__ == "__main__":
    unittest.main()
