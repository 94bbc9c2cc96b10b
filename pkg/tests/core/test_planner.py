#!/usr/bin/env python
import os
import sys
import unittest

import numpy as np

dir_name = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.join(dir_name, '..', '..'))
from libs.core.overlap import (OverlapSpec, ReflectionPoint,
                               optimal_sweep_frequency, round_trip_delay,
                               sweep_frequency_range)
from libs.core.planner import (OdnProfile, PlanStatus, ScanGrid,
                               effective_upper_frequency, overlap_map,
                               plan_common_sweep, scan_frequency_grid)
from libs.utils.errors import ContractError
from libs.utils.intervals import covers

DELTA_F = 1.55e9
SPEC = OverlapSpec.from_pi(0.4, DELTA_F)


def odn_of(*reaches):
    return OdnProfile(reflections=tuple(ReflectionPoint(r) for r in reaches))


def interval_holding(intervals, f):
    hits = [iv for iv in intervals if iv.contains(f)]
    return hits[0] if hits else None


class TestSingleReflection(unittest.TestCase):

    def setUp(self):
        self.plan = plan_common_sweep(odn_of(4300), SPEC)

    def test_kappa_at_optimum(self):
        self.assertEqual(self.plan.status, PlanStatus.OK)
        self.assertTrue(self.plan.has_kappa)
        f_opt = self.plan.per_fr[0].f_opt
        self.assertAlmostEqual(self.plan.chosen_frequency, f_opt, delta=5.0)
        sfr = interval_holding(self.plan.common_intervals, self.plan.chosen_frequency)
        self.assertAlmostEqual(sfr.width, 4.8e3, delta=0.05 * 4.8e3)

    def test_worst_overlap_within_threshold(self):
        self.assertLessEqual(self.plan.worst_overlap, self.plan.threshold)

    def test_max_required_frequency(self):
        plan = plan_common_sweep(odn_of(7000, 4300), SPEC)
        self.assertAlmostEqual(plan.max_required_frequency,
                               optimal_sweep_frequency(round_trip_delay(4300, 1.4683)))

    def test_border_has_no_kappa(self):
        plan = plan_common_sweep(odn_of(4300), OverlapSpec.from_pi(0.5, DELTA_F))
        self.assertEqual(plan.status, PlanStatus.NO_COMMON_FREQUENCY)
        self.assertIsNone(plan.chosen_frequency)
        self.assertIsNone(plan.worst_overlap)
        self.assertEqual(plan.common_intervals, [])

    def test_needs_a_reflection(self):
        with self.assertRaises(ContractError):
            plan_common_sweep(OdnProfile(), SPEC)

    def test_falling_ramp_plan(self):
        scan = ScanGrid(f_lo=8e3, f_hi=16e3, f_step=100.0)
        plan = plan_common_sweep(odn_of(4300), OverlapSpec.from_pi(0.21, DELTA_F),
                                 ramp_fraction=1.0 / 32, scan=scan, n_samples=4096)
        self.assertTrue(plan.has_kappa)
        self.assertLessEqual(plan.worst_overlap, plan.threshold)


class TestTwoReflections(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.plan = plan_common_sweep(odn_of(4300, 7000), SPEC)

    def test_common_interval_bounded_by_far_reflection(self):
        plan = self.plan
        self.assertTrue(plan.has_kappa)
        kappa = plan.chosen_frequency
        near, far = plan.per_fr
        common = interval_holding(plan.common_intervals, kappa)
        near_sfr = interval_holding(near.sfr_intervals, kappa)
        far_sfr = interval_holding(far.sfr_intervals, kappa)
        self.assertIsNotNone(near_sfr)
        self.assertIsNotNone(far_sfr)
        self.assertAlmostEqual(common.hi, far_sfr.hi, delta=1.0)
        self.assertLess(common.hi, near_sfr.hi)

    def test_membership_matches_brute_force(self):
        plan = self.plan
        grid = np.linspace(2e3, 1.1e5, 4001)
        for f in grid:
            every = all(covers(p.sfr_intervals, f) for p in plan.per_fr)
            if covers(plan.common_intervals, f) != every:
                # only bisection slivers at an edge may disagree
                edges = [e for iv in plan.common_intervals for e in (iv.lo, iv.hi)]
                self.assertLess(min(abs(f - e) for e in edges), 2.0, msg=f)

    def test_adding_reflection_never_widens(self):
        single = plan_common_sweep(odn_of(4300), SPEC)
        for iv in self.plan.common_intervals:
            self.assertTrue(covers(single.common_intervals, iv.midpoint))
        self.assertLessEqual(sum(iv.width for iv in self.plan.common_intervals),
                             sum(iv.width for iv in single.common_intervals))

    def test_kappa_is_widest_midpoint(self):
        widest = max(self.plan.common_intervals, key=lambda iv: iv.width)
        self.assertAlmostEqual(self.plan.chosen_frequency, widest.midpoint)


class TestOverlapMap(unittest.TestCase):

    def setUp(self):
        self.freqs = np.linspace(2e3, 4e4, 400)

    def test_pi_rows(self):
        result = overlap_map(odn_of(4300), self.freqs, DELTA_F)
        self.assertEqual(result.probabilities.shape, (6, 400))
        self.assertTrue(np.all(result.probabilities >= 0))
        self.assertTrue(np.all(result.probabilities <= 1))
        np.testing.assert_array_equal(result.probabilities[-1], 1.0)

    def test_valley_around_optimum(self):
        result = overlap_map(odn_of(4300), self.freqs, DELTA_F, pi_values=[0.4])
        row = result.probabilities[0]
        f_opt = optimal_sweep_frequency(round_trip_delay(4300, 1.4683))
        valley = self.freqs[row == 0]
        near = valley[np.abs(valley - f_opt) < 3e3]
        self.assertAlmostEqual(near.min() + (near.max() - near.min()) / 2, f_opt,
                               delta=100.0)

    def test_multi_reflection_is_worst_case(self):
        both = overlap_map(odn_of(4300, 7000), self.freqs, DELTA_F)
        near = overlap_map(odn_of(4300), self.freqs, DELTA_F)
        far = overlap_map(odn_of(7000), self.freqs, DELTA_F)
        np.testing.assert_array_equal(both.probabilities,
                                      np.maximum(near.probabilities, far.probabilities))

    def test_reach_axis(self):
        result = overlap_map(odn_of(4300, 7000), self.freqs, DELTA_F, axis='reach')
        self.assertEqual(list(result.axis_values), [4300.0, 7000.0])
        self.assertEqual(result.probabilities.shape, (2, 400))

    def test_rejects_bad_arguments(self):
        with self.assertRaises(ContractError):
            overlap_map(odn_of(4300), [], DELTA_F)
        with self.assertRaises(ContractError):
            overlap_map(odn_of(4300), self.freqs, DELTA_F, axis='time')

    def test_default_grid_spans_reflections(self):
        grid = scan_frequency_grid(odn_of(4300, 7000))
        self.assertLess(grid[0], optimal_sweep_frequency(round_trip_delay(7000, 1.4683)))
        self.assertGreater(grid[-1], optimal_sweep_frequency(round_trip_delay(4300, 1.4683)))

    def test_stepped_grid_is_linear(self):
        grid = scan_frequency_grid(odn_of(4300), ScanGrid(8e3, 16e3, 50.0))
        np.testing.assert_allclose(np.diff(grid), 50.0)


class TestEffectiveUpperFrequency(unittest.TestCase):

    def test_modulation_only(self):
        self.assertAlmostEqual(effective_upper_frequency(125e6, 0) / DELTA_F, 0.08,
                               delta=0.005)

    def test_with_lock_guard(self):
        self.assertAlmostEqual(effective_upper_frequency(125e6, 200e6) / DELTA_F, 0.21,
                               delta=0.005)
        self.assertEqual(effective_upper_frequency(0, 100e6), 100e6)

    def test_rejects_negative(self):
        with self.assertRaises(ContractError):
            effective_upper_frequency(-1.0, 0.0)


class TestOdnProfile(unittest.TestCase):

    def test_duplicate_reaches_warn(self):
        with self.assertLogs('libs.core.planner', level='WARNING'):
            odn_of(4300, 4300)

    def test_delays(self):
        odn = OdnProfile.single(4300)
        self.assertAlmostEqual(odn.delays()[0], 42.12e-6, delta=0.01e-6)

    def test_sfr_agrees_with_planner(self):
        odn = odn_of(4300)
        delay = odn.delays()[0]
        plan = plan_common_sweep(odn, SPEC)
        direct = sweep_frequency_range(delay, SPEC, f_lo=0.25 * plan.per_fr[0].f_opt,
                                       f_hi=10 * plan.per_fr[0].f_opt)
        self.assertEqual(list(plan.per_fr[0].sfr_intervals), direct)


if __name__ == '__main__':
    unittest.main()
