# libs/linksim/channel.py
"""Downlink fiber channel with discrete Fresnel reflections.

Fields are complex baseband in sqrt(mW), referenced to the unswept optical
carrier. The reflected light is the ONT laser's own emission; while that
laser is injection-locked it emits at the transmitter frequency, so each
reflection is the transmitter sweep delayed by its round trip.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from libs.core.overlap import displacement
from libs.core.planner import OdnProfile
from libs.core.waveform import (SweepWaveform, instantaneous_frequency,
                                phase_cycles)
from libs.linksim.ofdm import OfdmConfig
from libs.utils.errors import ContractError

logger = logging.getLogger(__name__)


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


@dataclass(frozen=True)
class LockModel:
    """Injection locking reduced to a frequency window and a response time."""
    locking_range: float = 100e6

    def __post_init__(self):
        if not self.locking_range > 0:
            raise ContractError(
                f"locking_range must be > 0, got {self.locking_range}")

    def response_samples(self, sample_rate) -> int:
        return max(1, int(round(sample_rate / self.locking_range)))


@dataclass(frozen=True)
class Scenario:
    """One link operating point.

    ``osrr`` of None removes the reflections. With ``mitigation_enabled``
    false both lasers keep static wavelengths; ``sweep`` still sets the
    simulated duration so static and swept runs carry the same payload.
    """
    odn: OdnProfile
    sweep: SweepWaveform
    ofdm: OfdmConfig = OfdmConfig()
    lock: LockModel = LockModel()
    sweep_phase_error: float = 0.0
    lo_deviation_mismatch: float = 60e6
    lo_free_detuning: float = -30e6
    osrr: Optional[float] = 5.0
    loss_budget: float = 26.8
    launch_power_dbm: float = 3.5
    lo_power_dbm: float = 4.5
    carrier_to_signal: float = 6.0
    reflection_phase: float = math.pi / 2
    noise_density: Optional[float] = None
    sensitivity_dbm: float = -24.0
    evm_limit: float = 12.5
    mitigation_enabled: bool = True
    duration: float = 1.0
    sample_rate: float = 4e9

    def __post_init__(self):
        if self.duration < 1:
            raise ContractError(f"duration must be >= 1 period, got {self.duration}")
        needed = 2.0 * (self.sweep.delta_f + self.ofdm.top_frequency)
        if not self.sample_rate > needed:
            raise ContractError(
                f"sample_rate must exceed {needed:.6g} Hz, got {self.sample_rate}")
        if self.loss_budget < 0:
            raise ContractError("loss_budget must be >= 0")

    @property
    def has_reflections(self) -> bool:
        return self.osrr is not None and bool(self.odn.reflections)

    @property
    def received_power_dbm(self) -> float:
        return self.launch_power_dbm - self.loss_budget - self.odn.excess_loss

    @property
    def carrier_amplitudes(self):
        """(a_c, a_m) with a_c**2 + a_m**2 = 1."""
        ratio = float(db_to_linear(self.carrier_to_signal))
        return math.sqrt(ratio / (1.0 + ratio)), math.sqrt(1.0 / (1.0 + ratio))

    def lo_waveform(self) -> SweepWaveform:
        """Free-running ONT laser sweep: mismatched deviation, shifted start."""
        lo = SweepWaveform(self.sweep.delta_f + self.lo_deviation_mismatch,
                           self.sweep.sweep_freq, self.sweep.ramp_fraction,
                           self.sweep.phase_offset)
        return lo.shifted(self.sweep_phase_error)

    def n_samples(self, symbol_length=1) -> int:
        """Samples in the simulated window, rounded down to whole symbols."""
        total = int(self.duration * self.sweep.period * self.sample_rate)
        return (total // symbol_length) * symbol_length

    def time_axis(self, n_samples) -> np.ndarray:
        return np.arange(n_samples) / self.sample_rate


@dataclass
class RxField:
    """Receiver-input field split into its parts.

    ``carrier_cycles`` is the transmitter's accumulated sweep phase and
    ``reflection_offsets[i]`` the frequency of reflection i relative to the
    signal carrier, both sampled on ``t``.
    """
    t: np.ndarray
    signal: np.ndarray
    carrier_cycles: np.ndarray
    reflections: List[np.ndarray] = field(default_factory=list)
    reflection_powers: List[float] = field(default_factory=list)
    reflection_offsets: List[np.ndarray] = field(default_factory=list)

    @property
    def total(self) -> np.ndarray:
        out = self.signal
        for r in self.reflections:
            out = out + r
        return out

    @property
    def signal_power(self) -> float:
        return float(np.mean(np.abs(self.signal) ** 2))

    @property
    def reflected_power(self) -> float:
        return float(sum(np.mean(np.abs(r) ** 2) for r in self.reflections))


def carrier_frequency(scenario: Scenario, t):
    """Transmitter frequency offset; zero when the sweep is off."""
    if not scenario.mitigation_enabled:
        return np.zeros_like(np.asarray(t, dtype=float))
    return instantaneous_frequency(scenario.sweep, t)


def carrier_cycles(scenario: Scenario, t):
    if not scenario.mitigation_enabled:
        return np.zeros_like(np.asarray(t, dtype=float))
    return phase_cycles(scenario.sweep, t)


def propagate(scenario: Scenario, tx_envelope) -> RxField:
    """Field at the receiver input for a complex OFDM (or pilot) envelope.

    The signal is ``sqrt(P_s) (a_c + a_m x) exp(j 2 pi Phi_S)`` with
    ``x = sqrt(2) Re(envelope)``. The total reflected power sits ``osrr`` dB
    below the measured signal power and is split across reflections in
    proportion to their linear reflectance.

    Each reflection replays the locked ONT emission, i.e. the transmitter
    sweep delayed by the round trip; ``lo_deviation_mismatch`` and
    ``sweep_phase_error`` shape only the free-running laser in the receiver.
    """
    envelope = np.asarray(tx_envelope)
    t = scenario.time_axis(envelope.shape[0])
    a_c, a_m = scenario.carrier_amplitudes
    p_s = float(db_to_linear(scenario.received_power_dbm))
    cycles = carrier_cycles(scenario, t)
    x = np.sqrt(2.0) * envelope.real
    signal = np.sqrt(p_s) * (a_c + a_m * x) * np.exp(2j * np.pi * cycles)
    rx = RxField(t, signal, cycles)
    if not scenario.has_reflections:
        return rx

    total = rx.signal_power * float(db_to_linear(-scenario.osrr))
    weights = db_to_linear([fr.reflectance for fr in scenario.odn.reflections])
    weights = weights / weights.sum()
    for fr, weight in zip(scenario.odn.reflections, weights):
        delay = scenario.odn.delay(fr)
        power = total * float(weight)
        if scenario.mitigation_enabled:
            echo = phase_cycles(scenario.sweep, t - delay)
            offset = displacement(scenario.sweep, delay, t)
        else:
            echo = np.zeros_like(t)
            offset = np.zeros_like(t)
        rx.reflections.append(
            np.sqrt(power) * np.exp(1j * (2 * np.pi * echo + scenario.reflection_phase)))
        rx.reflection_powers.append(power)
        rx.reflection_offsets.append(offset)
    logger.debug("propagated %d samples: P_sig %.4g mW, P_refl %.4g mW",
                 len(t), rx.signal_power, total)
    return rx
