#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""frsweep: plan wavelength-sweep rates against Fresnel reflections and
simulate the swept coherent link.

Usage: frsweep <command> --config run.json [--out DIR] [--seed N] [-v]
"""
import argparse
import logging
import os
import sys

from libs import __version__
from libs.core.planner import (PlanStatus, overlap_map, plan_common_sweep,
                               scan_frequency_grid)
from libs.core.settings import dump_resolved, parse_config, parse_mapping
from libs.formats import csv_io
from libs.linksim.experiment import (CaseLabel, budget_gains,
                                     pilot_beat_spectrum, run_link_experiment,
                                     scenario_from_config)
from libs.utils.constants import *
from libs.utils.errors import ConfigError, ContractError

__appname__ = 'frsweep'

logger = logging.getLogger(__appname__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_NO_KAPPA = 3
EXIT_DEMODULATION = 4

COMMANDS = ('plan', 'map', 'sfr', 'simulate', 'osrr-scan', 'budget-scan', 'pilot')


class NoCompatibleFrequency(Exception):
    pass


def build_parser():
    parser = argparse.ArgumentParser(
        prog=__appname__,
        description="Sweep-frequency planning and link simulation for "
                    "wavelength-swept reflection mitigation.")
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--config', required=True,
                        help="JSON file of dotted configuration keys")
    parser.add_argument('--out', default=None,
                        help="output directory (overrides run.out_dir)")
    parser.add_argument('--seed', type=int, default=None,
                        help="payload and noise seed (overrides run.seed)")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="-v for INFO, -vv for DEBUG")
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    return parser


def setup_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def load_config(args):
    cfg = parse_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides[KEY_RUN_SEED] = args.seed
    if args.out is not None:
        overrides[KEY_RUN_OUT_DIR] = args.out
    if overrides:
        cfg = parse_mapping({**cfg.data, **overrides}, source='command line')
    return cfg


def planned_odn(cfg):
    odn = cfg.odn()
    if not odn.reflections:
        raise ConfigError(KEY_ODN_REFLECTIONS, "empty", "at least one reflection")
    return odn


def make_plan(cfg):
    return plan_common_sweep(planned_odn(cfg), cfg.overlap_spec(),
                             cfg[KEY_SWEEP_RAMP_FRACTION], cfg[KEY_PLAN_THRESHOLD],
                             cfg.scan_grid(), cfg[KEY_PLAN_ORACLE_SAMPLES])


def link_scenario(cfg):
    """Scenario at the configured sweep frequency, or at the planned kappa."""
    sweep_freq = cfg[KEY_SWEEP_FREQ]
    if sweep_freq is None:
        plan = make_plan(cfg)
        if plan.status is PlanStatus.NO_COMMON_FREQUENCY:
            raise NoCompatibleFrequency()
        sweep_freq = plan.chosen_frequency
        logger.info("sweeping at planned kappa %.6g Hz", sweep_freq)
    return scenario_from_config(cfg, sweep_freq)


def cmd_plan(cfg, out):
    plan = make_plan(cfg)
    csv_io.write_plan(plan, os.path.join(out, 'plan.csv'))
    if plan.status is PlanStatus.NO_COMMON_FREQUENCY:
        return EXIT_NO_KAPPA
    return EXIT_OK


def cmd_sfr(cfg, out):
    plan = make_plan(cfg)
    csv_io.write_sfr(plan, os.path.join(out, 'sfr.csv'))
    return EXIT_OK


def cmd_map(cfg, out):
    odn = planned_odn(cfg)
    result = overlap_map(odn, scan_frequency_grid(odn, cfg.scan_grid()),
                         cfg[KEY_SWEEP_DELTA_F], axis='pi',
                         pi_values=cfg[KEY_MAP_PI_VALUES],
                         ramp_fraction=cfg[KEY_SWEEP_RAMP_FRACTION],
                         n_samples=cfg[KEY_PLAN_ORACLE_SAMPLES])
    csv_io.write_map(result, os.path.join(out, 'map.csv'))
    return EXIT_OK


def cmd_simulate(cfg, out):
    scenario = link_scenario(cfg)
    results = run_link_experiment(scenario, 'single', cfg[KEY_RUN_SEED],
                                  spectrum_nperseg=cfg[KEY_LINK_SPECTRUM_NPERSEG])
    csv_io.write_summary(results, os.path.join(out, 'summary.csv'))
    configured = next(r for r in results if r.case is CaseLabel.of(scenario))
    csv_io.write_spectrum(configured.spectrum, os.path.join(out, 'spectrum.csv'))
    if not configured.ok:
        return EXIT_DEMODULATION
    csv_io.write_evm(configured, os.path.join(out, 'evm.csv'))
    return EXIT_OK


def cmd_osrr_scan(cfg, out):
    results = run_link_experiment(link_scenario(cfg), 'osrr', cfg[KEY_RUN_SEED],
                                  osrr_values=cfg[KEY_SCAN_OSRR],
                                  spectrum_nperseg=cfg[KEY_LINK_SPECTRUM_NPERSEG])
    csv_io.write_summary(results, os.path.join(out, 'summary.csv'))
    return EXIT_OK


def cmd_budget_scan(cfg, out):
    results = run_link_experiment(link_scenario(cfg), 'budget', cfg[KEY_RUN_SEED],
                                  budgets=cfg[KEY_SCAN_BUDGET],
                                  spectrum_nperseg=cfg[KEY_LINK_SPECTRUM_NPERSEG])
    csv_io.write_summary(results, os.path.join(out, 'summary.csv'))
    limits = {'16QAM': cfg[KEY_LINK_EVM_LIMIT], 'QPSK': cfg[KEY_LINK_EVM_LIMIT_QPSK]}
    csv_io.write_budget_gains(budget_gains(results, limits), limits,
                              os.path.join(out, 'budget_gains.csv'))
    return EXIT_OK


def cmd_pilot(cfg, out):
    result = pilot_beat_spectrum(link_scenario(cfg), cfg[KEY_PILOT_FREQ],
                                 cfg[KEY_PILOT_FREE_RUNNING], cfg[KEY_RUN_SEED],
                                 cfg[KEY_PILOT_NPERSEG],
                                 cfg[KEY_LINK_SPECTRUM_NPERSEG])
    csv_io.write_spectrum(result.spectrum, os.path.join(out, 'spectrum.csv'))
    csv_io.write_pilot_track(result.track, os.path.join(out, 'pilot_track.csv'))
    return EXIT_OK


HANDLERS = {
    'plan': cmd_plan,
    'map': cmd_map,
    'sfr': cmd_sfr,
    'simulate': cmd_simulate,
    'osrr-scan': cmd_osrr_scan,
    'budget-scan': cmd_budget_scan,
    'pilot': cmd_pilot,
}


def run(argv=None):
    """Parse ``argv`` (without the program name), run one command and
    return its exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        cfg = load_config(args)
        out = cfg[KEY_RUN_OUT_DIR]
        os.makedirs(out, exist_ok=True)
        dump_resolved(cfg, os.path.join(out, RESOLVED_CONFIG_NAME))
        return HANDLERS[args.command](cfg, out)
    except ConfigError as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG
    except ContractError as e:
        logger.error("invalid parameters: %s", e)
        return EXIT_CONFIG
    except NoCompatibleFrequency:
        logger.error("no sweep frequency is compatible with every reflection; "
                     "set sweep.freq_hz explicitly")
        return EXIT_NO_KAPPA
    except Exception:
        logger.exception("unexpected failure")
        return EXIT_UNEXPECTED


def main():
    """construct the command line and run it"""
    return run(sys.argv[1:])


if __name__ == '__main__':
    sys.exit(main())
