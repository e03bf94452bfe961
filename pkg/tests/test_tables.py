import io
import math
import os
import shutil
import tempfile
import unittest

from spinpath.analysis import AdjustedAngles, ScanResult
from spinpath.errors import ValidationError
from spinpath.experiment import (ExperimentConfig, default_chi_grid, simulate_beam_block,
                                 simulate_interferogram, stream)
from spinpath.tables import (INTERFEROGRAM_HEADER, META_SUFFIX, read_beam_block,
                             read_interferogram, read_scan_results, read_table,
                             write_beam_block, write_interferogram, write_scan_results,
                             write_table)


class TableTestCase(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def path(self, name):
        return os.path.join(self.tmpdir, name)


class WriteTableTestCase(TableTestCase):

    def test_format(self):
        path = write_table(self.path('t.csv'), ('x', 'label', 'empty'),
                           [(0.1, 'polar', None), (2, 'azimuthal', None)])
        with io.open(path, 'rb') as stream_:
            self.assertEqual(stream_.read(),
                             b'x,label,empty\n0.1,polar,\n2,azimuthal,\n')

    def test_row_length_checked(self):
        self.assertRaises(ValidationError, write_table, self.path('t.csv'), ('a', 'b'),
                          [(1,)])

    def test_header_checked(self):
        write_table(self.path('t.csv'), ('a', 'b'), [(1, 2)])
        self.assertRaises(ValidationError, read_table, self.path('t.csv'), ('a', 'c'))


class InterferogramTableTestCase(TableTestCase):

    def test_round_trip_poisson(self):
        config = ExperimentConfig(seed=9, visibility=0.5, dyn_offset=0.1)
        gram = simulate_interferogram(config, math.pi / 7, 2 * math.pi / 3,
                                      default_chi_grid(), stream(9, 0, 1))
        path = write_interferogram(gram, self.path('g.csv'))
        self.assertTrue(os.path.exists(path + META_SUFFIX))
        again = read_interferogram(path)
        self.assertEqual(again, gram)
        self.assertEqual(list(again.chi_values), list(gram.chi_values))
        self.assertEqual(again.config, config)

    def test_round_trip_expected_counts(self):
        config = ExperimentConfig(statistics='expected')
        gram = simulate_interferogram(config, 0.3, 0.2)
        again = read_interferogram(write_interferogram(gram, self.path('g.csv')))
        self.assertEqual(list(again.counts), list(gram.counts))
        self.assertTrue(all(isinstance(n, float) for n in again.counts))

    def test_header(self):
        gram = simulate_interferogram(ExperimentConfig(), 0.0, 0.0)
        path = write_interferogram(gram, self.path('g.csv'))
        with io.open(path, encoding='utf-8') as stream_:
            self.assertEqual(stream_.readline().strip(), ','.join(INTERFEROGRAM_HEADER))


class BeamBlockTableTestCase(TableTestCase):

    def test_round_trip(self):
        scan = simulate_beam_block(ExperimentConfig(seed=4), gamma=0.5, blocked_path='I',
                                   rng=stream(4, 1, 0, 1))
        again = read_beam_block(write_beam_block(scan, self.path('b.csv')))
        self.assertEqual(again, scan)
        self.assertEqual(again.blocked_path, 'I')


class ScanTableTestCase(TableTestCase):

    def test_round_trip_with_empty_angles(self):
        results = [
            ScanResult(gamma=math.pi / 6, s=2.7182818284590451, sigma_s=0.01,
                       adjusted_angles=AdjustedAngles(beta1=0.71, beta1_p=2.43),
                       method='polar'),
            ScanResult(gamma=math.pi, s=2.8284271247461903, sigma_s=0.02,
                       adjusted_angles=AdjustedAngles(alpha2_p=math.pi),
                       method='azimuthal'),
        ]
        path = write_scan_results(results, self.path('scan.csv'))
        with io.open(path, encoding='utf-8') as stream_:
            lines = stream_.read().splitlines()
        self.assertEqual(lines[0], 'gamma_rad,beta1_rad,beta1p_rad,alpha2p_rad,s,sigma_s,method')
        self.assertTrue(lines[2].startswith(repr(math.pi) + ',,,'))
        self.assertEqual(read_scan_results(path), results)


if __name__ == "__main__":
    unittest.main()
