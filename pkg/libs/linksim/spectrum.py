# libs/linksim/spectrum.py
"""Spectral views of the detected RF waveform."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import signal

from libs.utils.errors import ContractError

logger = logging.getLogger(__name__)

# Floor keeping log10 finite on empty bins.
POWER_FLOOR = 1e-30


@dataclass
class Spectrum:
    freqs: np.ndarray
    power_db: np.ndarray

    @property
    def resolution(self) -> float:
        return float(self.freqs[1] - self.freqs[0])

    def peak(self, f_min=0.0, f_max=np.inf) -> float:
        """Frequency of the strongest bin within [f_min, f_max]."""
        band = (self.freqs >= f_min) & (self.freqs <= f_max)
        if not band.any():
            raise ContractError(f"no bins between {f_min} and {f_max} Hz")
        return float(self.freqs[band][np.argmax(self.power_db[band])])


@dataclass
class PeakTrack:
    t: np.ndarray
    f_peak: np.ndarray

    @property
    def deviation(self) -> float:
        return float(self.f_peak.max() - self.f_peak.min())


def averaged_periodogram(x, sample_rate, nperseg=4096) -> Spectrum:
    """Welch estimate (Hann window, half overlap) in dB re 1 unit**2/Hz."""
    x = np.asarray(x)
    if x.size < nperseg:
        raise ContractError(
            f"waveform of {x.size} samples is shorter than nperseg {nperseg}")
    freqs, pxx = signal.welch(x, fs=sample_rate, window='hann',
                              nperseg=nperseg, detrend=False,
                              scaling='density')
    return Spectrum(freqs, 10.0 * np.log10(pxx + POWER_FLOOR))


def peak_track(x, sample_rate, nperseg=1024, f_min=None) -> PeakTrack:
    """Strongest spectral component per short-time segment.

    Bins below ``f_min`` are ignored; the default skips the four lowest bins
    so residual baseband content near DC never wins.
    """
    x = np.asarray(x)
    if x.size < nperseg:
        raise ContractError(
            f"waveform of {x.size} samples is shorter than nperseg {nperseg}")
    freqs, times, zxx = signal.stft(x, fs=sample_rate, window='hann',
                                    nperseg=nperseg, boundary=None,
                                    padded=False)
    if f_min is None:
        f_min = 4 * sample_rate / nperseg
    usable = freqs >= f_min
    magnitude = np.abs(zxx[usable])
    f_peak = freqs[usable][np.argmax(magnitude, axis=0)]
    logger.debug("peak track over %d segments", len(times))
    return PeakTrack(times, f_peak)
