#!/usr/bin/env python
import os
import sys
import unittest
from dataclasses import replace

import numpy as np

dir_name = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.join(dir_name, '..', '..'))
from libs.core.overlap import optimal_sweep_frequency
from libs.core.planner import OdnProfile
from libs.core.settings import parse_mapping
from libs.core.waveform import SweepWaveform
from libs.linksim.channel import Scenario
from libs.linksim.experiment import (CaseLabel, LinkResult, LinkStatus,
                                     budget_gains, case_scenario,
                                     four_case_comparison, loss_budget_crossing,
                                     mitigation_budget_gain, pilot_beat_spectrum,
                                     run_link_experiment, scenario_from_config,
                                     simulate_link)
from libs.utils.errors import ContractError

DELTA_F = 1.55e9


def replica_scenario(**changes):
    odn = OdnProfile.single(4300)
    f_opt = optimal_sweep_frequency(odn.delays()[0])
    return replace(Scenario(odn=odn, sweep=SweepWaveform(DELTA_F, f_opt)), **changes)


def by_case(results):
    return {r.case: r for r in results}


def fake(case, budget, evm):
    return LinkResult(case, 5.0, budget, LinkStatus.OK, np.zeros(128), evm, 1.0)


class TestCases(unittest.TestCase):

    def test_labels(self):
        s = replica_scenario()
        self.assertIs(CaseLabel.of(s), CaseLabel.FR_SWEPT)
        self.assertIs(CaseLabel.of(replace(s, osrr=None)), CaseLabel.NO_FR_SWEPT)
        self.assertIs(CaseLabel.of(replace(s, mitigation_enabled=False)),
                      CaseLabel.FR_STATIC)
        self.assertIsNone(CaseLabel.NO_FR_STATIC.baseline)
        self.assertIs(CaseLabel.FR_SWEPT.baseline, CaseLabel.NO_FR_SWEPT)

    def test_case_scenario(self):
        s = replica_scenario()
        static = case_scenario(s, CaseLabel.FR_STATIC, osrr=0.8)
        self.assertEqual(static.osrr, 0.8)
        self.assertFalse(static.mitigation_enabled)
        self.assertIsNone(case_scenario(s, CaseLabel.NO_FR_SWEPT).osrr)
        with self.assertRaises(ContractError):
            case_scenario(replace(s, osrr=None), CaseLabel.FR_SWEPT)

    def test_from_config(self):
        cfg = parse_mapping({'odn.reflections': [{'reach_m': 4300.0}],
                             'link.osrr_db': 3.0})
        scenario = scenario_from_config(cfg, 12e3)
        self.assertEqual(scenario.sweep.sweep_freq, 12e3)
        self.assertEqual(scenario.osrr, 3.0)
        self.assertEqual(scenario.odn.reflections[0].reach, 4300.0)


class TestMitigation(unittest.TestCase):

    def penalties(self, osrr):
        results = by_case(four_case_comparison(replica_scenario(), seed=1, osrr=osrr))
        for r in results.values():
            self.assertTrue(r.ok, r.case)
        static = results[CaseLabel.FR_STATIC].evm_avg - results[CaseLabel.NO_FR_STATIC].evm_avg
        swept = results[CaseLabel.FR_SWEPT].evm_avg - results[CaseLabel.NO_FR_SWEPT].evm_avg
        return results, static, swept

    def test_penalty_reduction_at_5db(self):
        results, static, swept = self.penalties(5.0)
        self.assertGreater(static, 0.5)
        self.assertLessEqual(results[CaseLabel.FR_SWEPT].evm_avg,
                             results[CaseLabel.FR_STATIC].evm_avg)
        self.assertGreater(static, 5 * swept)
        self.assertAlmostEqual(results[CaseLabel.FR_STATIC].evm_penalty, static)

    def test_penalty_reduction_at_1db(self):
        _, static, swept = self.penalties(1.0)
        self.assertGreater(static, 5 * swept)

    def test_implementation_penalty(self):
        results, _, _ = self.penalties(5.0)
        penalty = results[CaseLabel.NO_FR_SWEPT].evm_penalty
        self.assertLess(abs(penalty), 1.5)

    def test_deterministic(self):
        a = simulate_link(replica_scenario(), seed=4)
        b = simulate_link(replica_scenario(), seed=4)
        np.testing.assert_array_equal(a.evm_per_subcarrier, b.evm_per_subcarrier)
        np.testing.assert_array_equal(a.spectrum.power_db, b.spectrum.power_db)
        self.assertEqual(a.constellation.shape[1], 128)

    def test_failed_point_is_recorded(self):
        result = simulate_link(replica_scenario(lo_free_detuning=-500e6))
        self.assertIs(result.status, LinkStatus.DEMODULATION_FAILED)
        self.assertFalse(result.ok)
        self.assertTrue(np.isnan(result.evm_avg))
        self.assertIsNotNone(result.spectrum)


class TestSweepSynchronization(unittest.TestCase):

    def test_aligned_sweeps_stay_locked(self):
        scenario = replica_scenario()
        self.assertLess(scenario.lo_deviation_mismatch, scenario.lock.locking_range)
        result = simulate_link(scenario, seed=1)
        self.assertTrue(result.ok)
        self.assertEqual(result.lock_fraction, 1.0)

    def test_phase_error_costs_lock_and_evm(self):
        aligned = simulate_link(replica_scenario(), seed=1)
        slipped = simulate_link(replica_scenario(sweep_phase_error=0.01), seed=1)
        self.assertLess(slipped.lock_fraction, 1.0)
        self.assertGreater(slipped.lock_fraction, 0.9)
        self.assertTrue(slipped.ok)
        self.assertGreater(slipped.evm_avg, aligned.evm_avg)

    def test_large_phase_error_loses_the_frame(self):
        result = simulate_link(replica_scenario(sweep_phase_error=0.1), seed=1)
        self.assertEqual(result.lock_fraction, 0.0)
        self.assertIs(result.status, LinkStatus.DEMODULATION_FAILED)


class TestScans(unittest.TestCase):

    def test_budget_scan_monotonic(self):
        results = run_link_experiment(replica_scenario(), 'budget', seed=2,
                                      budgets=[20.0, 25.0, 30.0])
        self.assertEqual(len(results), 12)
        baseline = [r.evm_avg for r in results if r.case is CaseLabel.NO_FR_STATIC]
        self.assertEqual(baseline, sorted(baseline))

    def test_osrr_scan_layout(self):
        results = run_link_experiment(replica_scenario(), 'osrr', seed=2,
                                      osrr_values=[2.0, 8.0])
        cases = [r.case for r in results]
        self.assertEqual(cases[:2], [CaseLabel.NO_FR_STATIC, CaseLabel.NO_FR_SWEPT])
        self.assertEqual(cases.count(CaseLabel.FR_SWEPT), 2)
        self.assertEqual([r.osrr for r in results[2:]], [2.0, 2.0, 8.0, 8.0])
        self.assertTrue(all(r.evm_penalty is not None for r in results))

    def test_scan_needs_values(self):
        with self.assertRaises(ContractError):
            run_link_experiment(replica_scenario(), 'osrr')
        with self.assertRaises(ContractError):
            run_link_experiment(replica_scenario(), 'sideways')


class TestBudgetCrossing(unittest.TestCase):

    def test_interpolates(self):
        results = [fake(CaseLabel.NO_FR_STATIC, b, e)
                   for b, e in ((24.0, 10.0), (26.0, 12.0), (28.0, 14.0))]
        self.assertAlmostEqual(loss_budget_crossing(results, 12.5), 26.5)
        self.assertIsNone(loss_budget_crossing(results, 20.0))

    def test_mitigation_gain(self):
        results = [fake(CaseLabel.FR_STATIC, b, e) for b, e in ((20.0, 11.0), (22.0, 13.0))]
        results += [fake(CaseLabel.FR_SWEPT, b, e) for b, e in ((24.0, 10.0), (26.0, 14.0))]
        self.assertAlmostEqual(mitigation_budget_gain(results, 12.0), 4.0)
        gains = budget_gains(results, {'16QAM': 12.0, 'QPSK': 30.0})
        self.assertAlmostEqual(gains['16QAM'], 4.0)
        self.assertIsNone(gains['QPSK'])


class TestPilot(unittest.TestCase):

    def test_locked_track_is_flat(self):
        result = pilot_beat_spectrum(replica_scenario(osrr=None), pilot_freq=200e6)
        bin_width = 4e9 / 1024
        self.assertFalse(result.free_running)
        self.assertTrue(np.all(np.abs(result.track.f_peak - 200e6) <= bin_width))

    def test_zero_sweep_locked_is_flat(self):
        result = pilot_beat_spectrum(replica_scenario(osrr=None, mitigation_enabled=False))
        self.assertLessEqual(result.track.deviation, 4e9 / 1024)

    def test_free_running_track_follows_sweep(self):
        result = pilot_beat_spectrum(replica_scenario(osrr=None), free_running=True)
        self.assertAlmostEqual(result.track.deviation, DELTA_F, delta=0.05 * DELTA_F)

    def test_pilot_below_nyquist(self):
        with self.assertRaises(ContractError):
            pilot_beat_spectrum(replica_scenario(), pilot_freq=3e9)


if __name__ == '__main__':
    unittest.main()
