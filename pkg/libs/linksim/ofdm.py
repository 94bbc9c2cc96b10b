# libs/linksim/ofdm.py
"""OFDM transmitter and EVM receiver for the radio-over-fiber downlink.

Subcarriers sit on consecutive DFT bins above DC, so the complex envelope is
one-sided and ``sqrt(2) * Re(envelope)`` is the real RF drive with the same
unit power. A constant-modulus training symbol precedes every group of
``pilot_symbol_period`` data symbols and feeds a one-tap equalizer.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from libs.utils.errors import ContractError, DemodulationError

logger = logging.getLogger(__name__)


class Constellation(Enum):
    QPSK = 'QPSK'
    QAM16 = '16QAM'

    @property
    def points(self) -> np.ndarray:
        """Unit average power constellation, Gray order not required."""
        if self is Constellation.QPSK:
            return np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2)
        levels = np.array([-3.0, -1.0, 1.0, 3.0])
        grid = levels[:, None] + 1j * levels[None, :]
        return grid.ravel() / np.sqrt(10)

    @property
    def order(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class OfdmConfig:
    """Multicarrier layout.

    Attributes:
        n_subcarriers: Active subcarriers, a power of two.
        bandwidth: Occupied bandwidth in Hz.
        constellation: Data constellation.
        cyclic_prefix_fraction: Prefix length relative to the FFT size.
        pilot_symbol_period: Data symbols per training symbol.
        center_offset: RF center of the band; None places the band one
            subcarrier spacing above DC.
    """
    n_subcarriers: int = 128
    bandwidth: float = 125e6
    constellation: Constellation = Constellation.QAM16
    cyclic_prefix_fraction: float = 1.0 / 16
    pilot_symbol_period: int = 16
    center_offset: Optional[float] = None

    def __post_init__(self):
        n = self.n_subcarriers
        if not isinstance(n, int) or n < 2 or n & (n - 1):
            raise ContractError(
                f"n_subcarriers must be a power of two >= 2, got {n}")
        if not self.bandwidth > 0:
            raise ContractError(f"bandwidth must be > 0, got {self.bandwidth}")
        if not 0 <= self.cyclic_prefix_fraction < 1:
            raise ContractError("cyclic_prefix_fraction must lie in [0, 1)")
        if self.pilot_symbol_period < 1:
            raise ContractError("pilot_symbol_period must be >= 1")
        if not isinstance(self.constellation, Constellation):
            object.__setattr__(self, 'constellation',
                               Constellation(self.constellation))

    @property
    def spacing(self) -> float:
        return self.bandwidth / self.n_subcarriers

    @property
    def center(self) -> float:
        if self.center_offset is not None:
            return self.center_offset
        return 0.5 * self.bandwidth + self.spacing

    @property
    def top_frequency(self) -> float:
        return self.center + 0.5 * self.bandwidth

    def fft_size(self, sample_rate) -> int:
        ratio = sample_rate / self.spacing
        size = int(round(ratio))
        if abs(ratio - size) > 1e-6 * ratio:
            raise ContractError(
                f"sample rate {sample_rate} Hz is not an integer multiple of "
                f"the subcarrier spacing {self.spacing} Hz")
        return size

    def first_bin(self, sample_rate) -> int:
        k0 = int(round(self.center / self.spacing)) - self.n_subcarriers // 2
        if k0 < 1 or k0 + self.n_subcarriers >= self.fft_size(sample_rate) // 2:
            raise ContractError(
                f"band centered at {self.center} Hz does not fit between DC "
                f"and Nyquist at {sample_rate} Hz")
        return k0

    def cp_length(self, sample_rate) -> int:
        return int(round(self.fft_size(sample_rate) * self.cyclic_prefix_fraction))

    def symbol_length(self, sample_rate) -> int:
        return self.fft_size(sample_rate) + self.cp_length(sample_rate)


@dataclass
class OfdmFrame:
    """A modulated frame together with everything the receiver may know."""
    envelope: np.ndarray
    data: np.ndarray            # (n_data, n_subcarriers) complex
    indices: Optional[np.ndarray]
    training: np.ndarray        # (n_subcarriers,) complex
    is_training: np.ndarray     # per OFDM symbol
    sample_rate: float

    @property
    def n_symbols(self) -> int:
        return len(self.is_training)


@dataclass
class EvmResult:
    evm_per_subcarrier: np.ndarray
    evm_avg: float
    equalized: np.ndarray


def training_sequence(n_subcarriers) -> np.ndarray:
    """Constant-modulus chirp used for channel estimation."""
    k = np.arange(n_subcarriers)
    return np.exp(1j * np.pi * k * k / n_subcarriers)


def map_symbols(constellation: Constellation, indices) -> np.ndarray:
    indices = np.asarray(indices)
    if indices.size and (indices.min() < 0 or indices.max() >= constellation.order):
        raise ContractError(
            f"symbol indices must lie in [0, {constellation.order}) "
            f"for {constellation.value}")
    return constellation.points[indices]


def hard_decisions(constellation: Constellation, symbols) -> np.ndarray:
    """Index of the nearest constellation point for every symbol."""
    points = constellation.points
    return np.argmin(np.abs(np.asarray(symbols)[..., None] - points), axis=-1)


def random_payload(cfg: OfdmConfig, n_data_symbols, rng) -> np.ndarray:
    return rng.integers(0, cfg.constellation.order,
                        size=(n_data_symbols, cfg.n_subcarriers))


def data_symbol_count(cfg: OfdmConfig, n_symbols, with_training=True):
    """Data symbols carried by a frame of ``n_symbols`` OFDM symbols."""
    if not with_training:
        return n_symbols
    group = cfg.pilot_symbol_period + 1
    full, rest = divmod(n_symbols, group)
    return full * cfg.pilot_symbol_period + max(rest - 1, 0)


def ofdm_modulate(cfg: OfdmConfig, payload, sample_rate,
                  with_training=True) -> OfdmFrame:
    """Modulate a payload grid into a unit-power complex envelope.

    Args:
        cfg: Subcarrier layout.
        payload: ``(n_data, n_subcarriers)`` array of constellation indices
            (integers) or of complex symbols used as given.
        sample_rate: Envelope sample rate in Hz.
        with_training: Interleave training symbols.

    Returns:
        OfdmFrame whose envelope holds whole OFDM symbols, prefixes included.
    """
    payload = np.asarray(payload)
    if payload.ndim != 2 or payload.shape[1] != cfg.n_subcarriers:
        raise ContractError(
            f"payload must have shape (n, {cfg.n_subcarriers}), "
            f"got {payload.shape}")
    if np.issubdtype(payload.dtype, np.integer):
        indices = payload
        data = map_symbols(cfg.constellation, payload)
    elif np.iscomplexobj(payload) or np.issubdtype(payload.dtype, np.floating):
        indices = None
        data = payload.astype(complex)
    else:
        raise ContractError(f"unsupported payload dtype {payload.dtype}")

    n_fft = cfg.fft_size(sample_rate)
    k0 = cfg.first_bin(sample_rate)
    cp = cfg.cp_length(sample_rate)
    training = training_sequence(cfg.n_subcarriers)

    rows, is_training = [], []
    for i, row in enumerate(data):
        if with_training and i % cfg.pilot_symbol_period == 0:
            rows.append(training)
            is_training.append(True)
        rows.append(row)
        is_training.append(False)
    grid = np.zeros((len(rows), n_fft), dtype=complex)
    if rows:
        grid[:, k0:k0 + cfg.n_subcarriers] = np.vstack(rows)
    body = np.fft.ifft(grid, axis=1) * (n_fft / np.sqrt(cfg.n_subcarriers))
    symbols = np.hstack([body[:, n_fft - cp:], body]) if cp else body
    logger.debug("modulated %d OFDM symbols (%d data), N=%d, cp=%d",
                 len(rows), len(data), n_fft, cp)
    return OfdmFrame(symbols.ravel(), data, indices, training,
                     np.array(is_training, dtype=bool), sample_rate)


def received_grid(cfg: OfdmConfig, waveform, frame: OfdmFrame) -> np.ndarray:
    """DFT of every received OFDM symbol, restricted to the active bins."""
    fs = frame.sample_rate
    n_fft = cfg.fft_size(fs)
    cp = cfg.cp_length(fs)
    length = n_fft + cp
    needed = frame.n_symbols * length
    waveform = np.asarray(waveform)
    if waveform.shape[0] < needed:
        raise DemodulationError(
            f"waveform holds {waveform.shape[0]} samples, frame needs {needed}")
    blocks = waveform[:needed].reshape(frame.n_symbols, length)[:, cp:]
    k0 = cfg.first_bin(fs)
    return np.fft.fft(blocks, axis=1)[:, k0:k0 + cfg.n_subcarriers]


def ofdm_demodulate_evm(cfg: OfdmConfig, waveform, frame: OfdmFrame) -> EvmResult:
    """Equalize with the training symbols and measure EVM per subcarrier.

    Symbol timing is the known frame start. The equalizer is the mean of
    ``Y / X`` over all training symbols. EVM is the rms error vector relative
    to the rms reference, in percent; ``evm_avg`` pools every data symbol of
    every subcarrier.

    Raises:
        DemodulationError: if the frame has no training or data symbols, or
            the channel estimate is not usable.
    """
    if not frame.is_training.any():
        raise DemodulationError("frame carries no training symbols")
    if len(frame.data) == 0:
        raise DemodulationError("frame carries no data symbols")
    y = received_grid(cfg, waveform, frame)
    estimate = np.mean(y[frame.is_training] / frame.training, axis=0)
    if not np.all(np.isfinite(estimate)) or np.any(np.abs(estimate) == 0):
        raise DemodulationError("channel estimate is degenerate")
    equalized = y[~frame.is_training] / estimate
    error = np.abs(equalized - frame.data) ** 2
    reference = np.abs(frame.data) ** 2
    ref_per_sc = reference.mean(axis=0)
    if np.any(ref_per_sc == 0):
        raise DemodulationError("reference payload has empty subcarriers")
    evm_per_sc = 100.0 * np.sqrt(error.mean(axis=0) / ref_per_sc)
    evm_avg = 100.0 * float(np.sqrt(error.sum() / reference.sum()))
    return EvmResult(evm_per_sc, evm_avg, equalized)
