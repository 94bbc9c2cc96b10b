# libs/linksim/receiver.py
"""Injection-locked homodyne receiver.

Lock rule, evaluated per sample: the ONT laser follows the incident signal
carrier when its free-running frequency lies within the locking range of
that carrier and the reflected power inside the locking range does not
exceed the signal power averaged over the locking response time. Unlocked
samples continue from the last locked phase along the free-running sweep.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter1d

from libs.core.waveform import instantaneous_frequency, phase_cycles
from libs.linksim.channel import RxField, Scenario, carrier_frequency, db_to_linear

logger = logging.getLogger(__name__)


@dataclass
class Detection:
    rf: np.ndarray
    locked: np.ndarray
    lo_field: np.ndarray

    @property
    def lock_fraction(self) -> float:
        if self.locked.size == 0:
            return 0.0
        return float(np.count_nonzero(self.locked)) / self.locked.size


def calibrated_noise_density(scenario: Scenario) -> float:
    """One-sided noise density putting the no-reflection EVM at the limit
    when the received power equals the sensitivity."""
    _, a_m = scenario.carrier_amplitudes
    p_lo = float(db_to_linear(scenario.lo_power_dbm))
    p_sens = float(db_to_linear(scenario.sensitivity_dbm))
    snr_limit = (100.0 / scenario.evm_limit) ** 2
    return 4.0 * p_lo * p_sens * a_m ** 2 / (scenario.ofdm.bandwidth * snr_limit)


def noise_density(scenario: Scenario) -> float:
    if scenario.noise_density is not None:
        return scenario.noise_density
    return calibrated_noise_density(scenario)


def free_running_frequency(scenario: Scenario, t):
    """Frequency offset of the unlocked ONT laser."""
    t = np.asarray(t, dtype=float)
    if not scenario.mitigation_enabled:
        return np.full_like(t, scenario.lo_free_detuning)
    return instantaneous_frequency(scenario.lo_waveform(), t) + scenario.lo_free_detuning


def free_running_cycles(scenario: Scenario, t):
    t = np.asarray(t, dtype=float)
    cycles = scenario.lo_free_detuning * t
    if scenario.mitigation_enabled:
        cycles = cycles + phase_cycles(scenario.lo_waveform(), t)
    return cycles


def lock_state(scenario: Scenario, rx: RxField) -> np.ndarray:
    """Boolean lock series following the per-sample lock rule."""
    locking_range = scenario.lock.locking_range
    detuning = np.abs(free_running_frequency(scenario, rx.t)
                      - carrier_frequency(scenario, rx.t))
    in_guard = np.zeros_like(rx.t)
    for power, offset in zip(rx.reflection_powers, rx.reflection_offsets):
        in_guard += power * (np.abs(offset) < locking_range)
    window = scenario.lock.response_samples(scenario.sample_rate)
    smoothed = uniform_filter1d(np.abs(rx.signal) ** 2, size=window,
                                mode='nearest')
    return (detuning < locking_range) & (in_guard <= smoothed)


def lo_phase(scenario: Scenario, rx: RxField, locked) -> np.ndarray:
    """LO phase in radians: the signal carrier phase while locked, free
    running from the last locked sample otherwise."""
    carrier = 2 * np.pi * rx.carrier_cycles
    free = 2 * np.pi * free_running_cycles(scenario, rx.t)
    index = np.arange(len(rx.t))
    last = np.maximum.accumulate(np.where(locked, index, -1))
    last[last < 0] = 0
    return np.where(locked, carrier, carrier[last] + free - free[last])


def homodyne_detect(scenario: Scenario, rx: RxField, rng=None,
                    free_running=False) -> Detection:
    """Square-law detection of the received field against the ONT laser.

    Args:
        scenario: Link operating point.
        rx: Receiver-input field from ``propagate``.
        rng: numpy Generator for the additive noise; None adds no noise.
        free_running: Beat against a stable unswept reference laser instead
            of the injection-locked ONT laser. The lock series is then all
            False.

    Returns:
        Detection with the mean-free photocurrent and the lock series.
    """
    p_lo = float(db_to_linear(scenario.lo_power_dbm))
    if free_running:
        locked = np.zeros(len(rx.t), dtype=bool)
        lo_field = np.full(len(rx.t), np.sqrt(p_lo), dtype=complex)
    else:
        locked = lock_state(scenario, rx)
        lo_field = np.sqrt(p_lo) * np.exp(1j * lo_phase(scenario, rx, locked))
    current = np.abs(rx.total + lo_field) ** 2
    rf = current - current.mean()
    if rng is not None:
        sigma = np.sqrt(noise_density(scenario) * scenario.sample_rate / 2.0)
        rf = rf + rng.normal(0.0, sigma, size=rf.shape)
    detection = Detection(rf, locked, lo_field)
    if not free_running and detection.lock_fraction < 1.0:
        logger.info("ONT laser locked for %.1f%% of the window",
                    100.0 * detection.lock_fraction)
    return detection
