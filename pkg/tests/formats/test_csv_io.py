"""Tests for the CSV artifact writers with temp file isolation."""
import os
import shutil
import sys
import tempfile
import unittest

import numpy as np

dir_name = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.join(dir_name, '..', '..'))

from libs.core.overlap import OverlapSpec, ReflectionPoint
from libs.core.planner import OdnProfile, overlap_map, plan_common_sweep
from libs.formats import csv_io
from libs.linksim.experiment import CaseLabel, LinkResult, LinkStatus
from libs.linksim.spectrum import PeakTrack, Spectrum

SPEC = OverlapSpec.from_pi(0.4, 1.55e9)


class TestCsvWriters(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def path(self, name):
        return os.path.join(self.temp_dir, name)

    def header(self, path):
        with open(path, encoding='utf-8', newline='') as f:
            return f.readline()

    def test_plan_rows(self):
        odn = OdnProfile(reflections=(ReflectionPoint(4300), ReflectionPoint(7000)))
        plan = plan_common_sweep(odn, SPEC)
        path = csv_io.write_plan(plan, self.path('plan.csv'))
        self.assertEqual(self.header(path),
                         'reach_m,f_opt_hz,sfr_lo_hz,sfr_hi_hz,common_lo_hz,'
                         'common_hi_hz,kappa_hz,worst_overlap\n')
        table = csv_io.read_table(path)
        self.assertEqual(list(table['reach_m']), [4300.0, 7000.0])
        self.assertTrue((table['sfr_lo_hz'] <= table['kappa_hz']).all())
        self.assertTrue((table['kappa_hz'] < table['sfr_hi_hz']).all())

    def test_plan_without_kappa_leaves_cells_empty(self):
        plan = plan_common_sweep(OdnProfile.single(4300), OverlapSpec.from_pi(0.5, 1.55e9))
        path = csv_io.write_plan(plan, self.path('plan.csv'))
        with open(path, encoding='utf-8') as f:
            row = f.read().splitlines()[1]
        self.assertTrue(row.endswith(',,,,,'))

    def test_sfr_and_map(self):
        odn = OdnProfile.single(4300)
        plan = plan_common_sweep(odn, SPEC)
        table = csv_io.read_table(csv_io.write_sfr(plan, self.path('sfr.csv')))
        self.assertEqual(len(table), len(plan.per_fr[0].sfr_intervals))
        freqs = np.linspace(5e3, 2e4, 11)
        result = overlap_map(odn, freqs, 1.55e9, pi_values=[0.0, 0.4])
        path = csv_io.write_map(result, self.path('map.csv'))
        self.assertEqual(self.header(path), 'f_hz,pi_eff,overlap_prob\n')
        self.assertEqual(len(csv_io.read_table(path)), 22)
        reach = overlap_map(odn, freqs, 1.55e9, axis='reach')
        path = csv_io.write_map(reach, self.path('reach.csv'))
        self.assertEqual(self.header(path), 'f_hz,reach_m,overlap_prob\n')

    def test_link_tables(self):
        result = LinkResult(CaseLabel.FR_SWEPT, 5.0, 26.8, LinkStatus.OK,
                            np.full(4, 2.5), 2.5, 1.0, evm_penalty=0.25)
        failed = LinkResult(CaseLabel.FR_STATIC, 5.0, 26.8,
                            LinkStatus.DEMODULATION_FAILED, np.full(4, np.nan),
                            np.nan, 0.0)
        path = csv_io.write_summary([result, failed], self.path('summary.csv'))
        with open(path, encoding='utf-8', newline='') as f:
            lines = f.read().split('\n')
        self.assertEqual(lines[0], 'case,osrr_db,budget_db,evm_avg_pct,penalty_pct,'
                                   'lock_fraction')
        self.assertEqual(lines[1], 'fr_swept,5,26.8,2.5,0.25,1')
        self.assertEqual(lines[2], 'fr_static,5,26.8,,,0')
        evm = csv_io.read_table(csv_io.write_evm(result, self.path('evm.csv')))
        self.assertEqual(list(evm['subcarrier']), [0, 1, 2, 3])

    def test_spectrum_and_track(self):
        spectrum = Spectrum(np.array([0.0, 1e6]), np.array([-80.0, -75.5]))
        path = csv_io.write_spectrum(spectrum, self.path('spectrum.csv'))
        self.assertEqual(self.header(path), 'freq_hz,power_db\n')
        track = PeakTrack(np.array([0.0, 1e-7]), np.array([2e8, 2e8]))
        path = csv_io.write_pilot_track(track, self.path('pilot_track.csv'))
        self.assertEqual(self.header(path), 't_s,f_peak_hz\n')

    def test_budget_gains(self):
        path = csv_io.write_budget_gains({'16QAM': 1.5, 'QPSK': None},
                                         {'16QAM': 12.5, 'QPSK': 17.5},
                                         self.path('budget_gains.csv'))
        with open(path, encoding='utf-8') as f:
            lines = f.read().splitlines()
        self.assertEqual(lines, ['limit,evm_limit_pct,budget_gain_db',
                                 '16QAM,12.5,1.5', 'QPSK,17.5,'])

    def test_identical_inputs_identical_bytes(self):
        plan = plan_common_sweep(OdnProfile.single(7000), SPEC)
        a = csv_io.write_plan(plan, self.path('a.csv'))
        b = csv_io.write_plan(plan, self.path('b.csv'))
        with open(a, 'rb') as fa, open(b, 'rb') as fb:
            self.assertEqual(fa.read(), fb.read())


if __name__ == '__main__':
    unittest.main()
