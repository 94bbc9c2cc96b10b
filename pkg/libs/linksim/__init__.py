# libs/linksim/__init__.py
"""Discrete-time simulation of the swept coherent homodyne link."""

from libs.linksim.ofdm import OfdmConfig, Constellation, ofdm_modulate, ofdm_demodulate_evm
from libs.linksim.channel import LockModel, Scenario, RxField, propagate
from libs.linksim.receiver import Detection, homodyne_detect
from libs.linksim.spectrum import Spectrum, PeakTrack, averaged_periodogram, peak_track
from libs.linksim.experiment import (CaseLabel, LinkResult, LinkStatus, run_link_experiment,
                                     pilot_beat_spectrum, loss_budget_crossing)

__all__ = [
    'OfdmConfig', 'Constellation', 'ofdm_modulate', 'ofdm_demodulate_evm',
    'LockModel', 'Scenario', 'RxField', 'propagate',
    'Detection', 'homodyne_detect',
    'Spectrum', 'PeakTrack', 'averaged_periodogram', 'peak_track',
    'CaseLabel', 'LinkResult', 'LinkStatus', 'run_link_experiment',
    'pilot_beat_spectrum', 'loss_budget_crossing',
]
