# libs/linksim/experiment.py
"""Link experiments: single runs, the four-case comparison, OSRR and loss
budget scans, and the pilot-tone beat measurement.

Every run of one experiment draws the payload from ``default_rng([seed, 0])``
and the receiver noise from ``default_rng([seed, 1])``, so cases differ only
in the physics they switch on.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np

from libs.core.settings import RunConfig
from libs.linksim.channel import LockModel, Scenario, propagate
from libs.linksim.ofdm import (Constellation, OfdmConfig, data_symbol_count,
                               ofdm_demodulate_evm, ofdm_modulate, random_payload)
from libs.linksim.receiver import homodyne_detect
from libs.linksim.spectrum import (PeakTrack, Spectrum, averaged_periodogram,
                                   peak_track)
from libs.utils.constants import *
from libs.utils.errors import ContractError, DemodulationError

logger = logging.getLogger(__name__)

PAYLOAD_STREAM = 0
NOISE_STREAM = 1


class CaseLabel(Enum):
    NO_FR_STATIC = 'no_fr_static'
    NO_FR_SWEPT = 'no_fr_swept'
    FR_STATIC = 'fr_static'
    FR_SWEPT = 'fr_swept'

    @classmethod
    def of(cls, scenario: Scenario):
        if scenario.has_reflections:
            return cls.FR_SWEPT if scenario.mitigation_enabled else cls.FR_STATIC
        return cls.NO_FR_SWEPT if scenario.mitigation_enabled else cls.NO_FR_STATIC

    @property
    def baseline(self):
        """Case the EVM penalty is measured against."""
        return {
            CaseLabel.NO_FR_STATIC: None,
            CaseLabel.NO_FR_SWEPT: CaseLabel.NO_FR_STATIC,
            CaseLabel.FR_STATIC: CaseLabel.NO_FR_STATIC,
            CaseLabel.FR_SWEPT: CaseLabel.NO_FR_SWEPT,
        }[self]


class LinkStatus(Enum):
    OK = 'ok'
    DEMODULATION_FAILED = 'demodulation_failed'


@dataclass
class LinkResult:
    case: CaseLabel
    osrr: Optional[float]
    loss_budget: float
    status: LinkStatus
    evm_per_subcarrier: np.ndarray
    evm_avg: float
    lock_fraction: float
    evm_penalty: Optional[float] = None
    spectrum: Optional[Spectrum] = None
    constellation: Optional[np.ndarray] = None

    @property
    def ok(self) -> bool:
        return self.status is LinkStatus.OK


@dataclass
class PilotResult:
    spectrum: Spectrum
    track: PeakTrack
    free_running: bool


def scenario_from_config(cfg: RunConfig, sweep_freq=None) -> Scenario:
    """Link scenario for a resolved configuration.

    ``sweep_freq`` overrides ``sweep.freq_hz``, typically with a planned kappa.
    """
    ofdm = OfdmConfig(cfg[KEY_OFDM_N_SUBCARRIERS], cfg[KEY_OFDM_BANDWIDTH],
                      Constellation(cfg[KEY_OFDM_CONSTELLATION]),
                      cfg[KEY_OFDM_CP_FRACTION], cfg[KEY_OFDM_PILOT_PERIOD],
                      cfg[KEY_OFDM_CENTER_OFFSET])
    return Scenario(
        odn=cfg.odn(),
        sweep=cfg.sweep_waveform(sweep_freq),
        ofdm=ofdm,
        lock=LockModel(cfg[KEY_LINK_LOCKING_RANGE]),
        sweep_phase_error=cfg[KEY_LINK_SWEEP_PHASE_ERROR],
        lo_deviation_mismatch=cfg[KEY_LINK_LO_MISMATCH],
        lo_free_detuning=cfg[KEY_LINK_LO_DETUNING],
        osrr=cfg[KEY_LINK_OSRR],
        loss_budget=cfg[KEY_LINK_LOSS_BUDGET],
        launch_power_dbm=cfg[KEY_LINK_LAUNCH_POWER],
        lo_power_dbm=cfg[KEY_LINK_LO_POWER],
        carrier_to_signal=cfg[KEY_LINK_CARRIER_RATIO],
        reflection_phase=cfg[KEY_LINK_REFLECTION_PHASE],
        noise_density=cfg[KEY_LINK_NOISE_DENSITY],
        sensitivity_dbm=cfg[KEY_LINK_SENSITIVITY],
        evm_limit=cfg[KEY_LINK_EVM_LIMIT],
        mitigation_enabled=cfg[KEY_LINK_MITIGATION],
        duration=cfg[KEY_LINK_DURATION],
        sample_rate=cfg[KEY_LINK_SAMPLE_RATE],
    )


def case_scenario(scenario: Scenario, case: CaseLabel,
                  osrr: Optional[float] = None) -> Scenario:
    """Variant of ``scenario`` for one of the four comparison cases.

    Reflection cases keep the scenario's OSRR unless ``osrr`` is given.
    """
    with_fr = case in (CaseLabel.FR_STATIC, CaseLabel.FR_SWEPT)
    swept = case in (CaseLabel.NO_FR_SWEPT, CaseLabel.FR_SWEPT)
    if with_fr:
        level = scenario.osrr if osrr is None else osrr
        if level is None or not scenario.odn.reflections:
            raise ContractError(f"case {case.value} needs reflections and an OSRR")
    else:
        level = None
    return replace(scenario, osrr=level, mitigation_enabled=swept)


def build_frame(scenario: Scenario, seed):
    fs = scenario.sample_rate
    length = scenario.ofdm.symbol_length(fs)
    n_symbols = scenario.n_samples(length) // length
    n_data = data_symbol_count(scenario.ofdm, n_symbols)
    if n_data < 1:
        raise ContractError(
            f"simulated window holds {n_symbols} OFDM symbols, too few for a frame")
    rng = np.random.default_rng([seed, PAYLOAD_STREAM])
    return ofdm_modulate(scenario.ofdm, random_payload(scenario.ofdm, n_data, rng), fs)


def simulate_link(scenario: Scenario, seed=1, spectrum_nperseg=4096) -> LinkResult:
    """propagate, detect and demodulate one operating point."""
    case = CaseLabel.of(scenario)
    frame = build_frame(scenario, seed)
    rx = propagate(scenario, frame.envelope)
    detection = homodyne_detect(scenario, rx,
                                np.random.default_rng([seed, NOISE_STREAM]))
    spectrum = averaged_periodogram(detection.rf, scenario.sample_rate,
                                    spectrum_nperseg)
    try:
        if detection.lock_fraction == 0.0:
            raise DemodulationError("ONT laser never locked")
        evm = ofdm_demodulate_evm(scenario.ofdm, detection.rf, frame)
    except DemodulationError as e:
        logger.warning("%s at OSRR %s dB, budget %.1f dB: %s", case.value,
                       scenario.osrr, scenario.loss_budget, e)
        return LinkResult(case, scenario.osrr, scenario.loss_budget,
                          LinkStatus.DEMODULATION_FAILED,
                          np.full(scenario.ofdm.n_subcarriers, np.nan), np.nan,
                          detection.lock_fraction, spectrum=spectrum)
    logger.info("%s: EVM %.2f%%, locked %.3f", case.value, evm.evm_avg,
                detection.lock_fraction)
    return LinkResult(case, scenario.osrr, scenario.loss_budget, LinkStatus.OK,
                      evm.evm_per_subcarrier, evm.evm_avg,
                      detection.lock_fraction, spectrum=spectrum,
                      constellation=evm.equalized)


def _apply_penalties(results: Sequence[LinkResult]):
    by_case = {r.case: r for r in results}
    for r in results:
        if r.case.baseline is None:
            r.evm_penalty = 0.0 if r.ok else None
            continue
        base = by_case.get(r.case.baseline)
        if base is not None and base.ok and r.ok:
            r.evm_penalty = r.evm_avg - base.evm_avg


def four_case_comparison(scenario: Scenario, seed=1, osrr=None,
                         spectrum_nperseg=4096) -> List[LinkResult]:
    """No-FR static, no-FR swept, FR static and FR swept at one operating
    point, each carrying its EVM penalty against its baseline."""
    results = [simulate_link(case_scenario(scenario, case, osrr), seed,
                             spectrum_nperseg)
               for case in CaseLabel]
    _apply_penalties(results)
    return results


def osrr_scan(scenario: Scenario, osrr_values, seed=1,
              spectrum_nperseg=4096) -> List[LinkResult]:
    """EVM versus OSRR with and without sweeping, baselines first."""
    if len(osrr_values) == 0:
        raise ContractError("osrr scan needs at least one value")
    baselines = [simulate_link(case_scenario(scenario, case), seed, spectrum_nperseg)
                 for case in (CaseLabel.NO_FR_STATIC, CaseLabel.NO_FR_SWEPT)]
    _apply_penalties(baselines)
    results = list(baselines)
    for level in osrr_values:
        point = [simulate_link(case_scenario(scenario, case, level), seed,
                               spectrum_nperseg)
                 for case in (CaseLabel.FR_STATIC, CaseLabel.FR_SWEPT)]
        _apply_penalties(baselines + point)
        results.extend(point)
    return results


def budget_scan(scenario: Scenario, budgets, seed=1,
                spectrum_nperseg=4096) -> List[LinkResult]:
    """Four-case comparison at every loss budget."""
    if len(budgets) == 0:
        raise ContractError("budget scan needs at least one value")
    results = []
    for budget in budgets:
        results.extend(four_case_comparison(
            replace(scenario, loss_budget=float(budget)), seed,
            spectrum_nperseg=spectrum_nperseg))
    return results


def loss_budget_crossing(results: Sequence[LinkResult], limit) -> Optional[float]:
    """Loss budget where the EVM of one case first rises through ``limit``.

    Linear interpolation between scan points; None when the curve stays on
    one side of the limit.
    """
    points = sorted((r.loss_budget, r.evm_avg) for r in results if r.ok)
    for (b0, e0), (b1, e1) in zip(points, points[1:]):
        if e0 <= limit < e1:
            return b0 + (limit - e0) * (b1 - b0) / (e1 - e0)
    return None


def mitigation_budget_gain(results: Sequence[LinkResult], limit) -> Optional[float]:
    """Loss-budget improvement of FR swept over FR static at an EVM limit."""
    swept = loss_budget_crossing(
        [r for r in results if r.case is CaseLabel.FR_SWEPT], limit)
    static = loss_budget_crossing(
        [r for r in results if r.case is CaseLabel.FR_STATIC], limit)
    if swept is None or static is None:
        return None
    return swept - static


def budget_gains(results: Sequence[LinkResult], limits: Dict[str, float]):
    return {name: mitigation_budget_gain(results, limit)
            for name, limit in limits.items()}


def run_link_experiment(scenario: Scenario, kind='single', seed=1,
                        osrr_values=(), budgets=(),
                        spectrum_nperseg=4096) -> List[LinkResult]:
    """Dispatch ``single`` (the four cases), ``osrr`` or ``budget`` runs.

    Failed points are recorded with ``LinkStatus.DEMODULATION_FAILED``; the
    run always completes.
    """
    if kind == 'single':
        return four_case_comparison(scenario, seed,
                                    spectrum_nperseg=spectrum_nperseg)
    if kind == 'osrr':
        return osrr_scan(scenario, list(osrr_values), seed, spectrum_nperseg)
    if kind == 'budget':
        return budget_scan(scenario, list(budgets), seed, spectrum_nperseg)
    raise ContractError(f"unknown experiment kind {kind!r}")


def pilot_beat_spectrum(scenario: Scenario, pilot_freq=200e6, free_running=False,
                        seed=1, nperseg=1024, spectrum_nperseg=4096) -> PilotResult:
    """Detect a single pilot tone in place of the OFDM band.

    With ``free_running`` the swept transmitter beats against a stable
    reference laser and the track follows the sweep; otherwise the
    injection-locked pair holds the pilot at ``pilot_freq``.
    """
    if not 0 < pilot_freq < scenario.sample_rate / 2:
        raise ContractError(
            f"pilot frequency must lie in (0, {scenario.sample_rate / 2}) Hz")
    n = scenario.n_samples()
    t = scenario.time_axis(n)
    envelope = np.exp(2j * np.pi * pilot_freq * t)
    rx = propagate(scenario, envelope)
    detection = homodyne_detect(scenario, rx,
                                np.random.default_rng([seed, NOISE_STREAM]),
                                free_running=free_running)
    spectrum = averaged_periodogram(detection.rf, scenario.sample_rate,
                                    spectrum_nperseg)
    track = peak_track(detection.rf, scenario.sample_rate, nperseg)
    logger.info("pilot track deviation %.4g Hz (%s)", track.deviation,
                'free running' if free_running else 'locked')
    return PilotResult(spectrum, track, free_running)
