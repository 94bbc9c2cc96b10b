# libs/core/settings.py
"""Run configuration: a flat JSON object keyed by dotted paths.

Every physical quantity carries its unit in the key name. Parsing is strict:
unknown keys, wrong types and out-of-range values raise ``ConfigError``
naming the offending path. ``dump_resolved`` writes every key, defaults
included, so a run can be reproduced from its output directory.
"""

import copy
import json
import logging
import math
import os
from typing import Any, Callable, Dict, Optional, Tuple

from libs.core.overlap import OverlapSpec, ReflectionPoint
from libs.core.planner import OdnProfile, ScanGrid
from libs.core.waveform import SweepWaveform
from libs.utils.constants import *
from libs.utils.errors import ConfigError

logger = logging.getLogger(__name__)

CONSTELLATIONS = ('QPSK', '16QAM')
DEFAULT_REFLECTANCE_DB = -14.7


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _real(check: Optional[Callable[[float], bool]] = None, expected='a number',
          optional=False):
    """Build a converter for a float key with an optional range check."""
    def convert(path, value):
        if value is None and optional:
            return None
        if not _is_number(value) or not math.isfinite(value):
            raise ConfigError(path, f"not a finite number: {value!r}", expected)
        value = float(value)
        if check is not None and not check(value):
            raise ConfigError(path, f"out of range: {value!r}", expected)
        return value
    return convert


def _integer(check: Callable[[int], bool], expected):
    def convert(path, value):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(path, f"not an integer: {value!r}", expected)
        if not check(value):
            raise ConfigError(path, f"out of range: {value!r}", expected)
        return value
    return convert


def _boolean(path, value):
    if not isinstance(value, bool):
        raise ConfigError(path, f"not a boolean: {value!r}", "true or false")
    return value


def _string(path, value):
    if not isinstance(value, str) or not value:
        raise ConfigError(path, f"not a nonempty string: {value!r}", "a string")
    return value


def _choice(options):
    def convert(path, value):
        if value not in options:
            raise ConfigError(path, f"unknown value {value!r}",
                              " or ".join(options))
        return value
    return convert


def _real_list(item: Callable, expected):
    def convert(path, value):
        if not isinstance(value, list) or not value:
            raise ConfigError(path, f"not a nonempty list: {value!r}", expected)
        return [item(f"{path}[{i}]", v) for i, v in enumerate(value)]
    return convert


_reach = _real(lambda v: v > 0, "> 0 m")
_reflectance = _real(lambda v: v <= 0, "<= 0 dB")


def _reflections(path, value):
    if not isinstance(value, list):
        raise ConfigError(path, f"not a list: {value!r}",
                          "a list of {reach_m, reflectance_db} objects")
    items = []
    for i, item in enumerate(value):
        item_path = f"{path}[{i}]"
        if not isinstance(item, dict):
            raise ConfigError(item_path, f"not an object: {item!r}",
                              "{reach_m, reflectance_db}")
        unknown = set(item) - {KEY_REFLECTION_REACH, KEY_REFLECTION_REFLECTANCE}
        if unknown:
            raise ConfigError(f"{item_path}.{sorted(unknown)[0]}", "unknown key",
                              f"{KEY_REFLECTION_REACH} or {KEY_REFLECTION_REFLECTANCE}")
        if KEY_REFLECTION_REACH not in item:
            raise ConfigError(f"{item_path}.{KEY_REFLECTION_REACH}",
                              "missing", "> 0 m")
        items.append({
            KEY_REFLECTION_REACH: _reach(f"{item_path}.{KEY_REFLECTION_REACH}",
                                         item[KEY_REFLECTION_REACH]),
            KEY_REFLECTION_REFLECTANCE: _reflectance(
                f"{item_path}.{KEY_REFLECTION_REFLECTANCE}",
                item.get(KEY_REFLECTION_REFLECTANCE, DEFAULT_REFLECTANCE_DB)),
        })
    return items


def _power_of_two(v):
    return v >= 2 and v & (v - 1) == 0


_positive = _real(lambda v: v > 0, "> 0")
_non_negative = _real(lambda v: v >= 0, ">= 0")
_optional_positive = _real(lambda v: v > 0, "> 0 or null", optional=True)
_optional_non_negative = _real(lambda v: v >= 0, ">= 0 or null", optional=True)
_unit_interval = _real(lambda v: 0 <= v <= 1, "within [0, 1]")
_any_real = _real()

# key -> (default, converter)
_SCHEMA: Dict[str, Tuple[Any, Callable]] = {
    KEY_ODN_GROUP_INDEX: (1.4683, _real(lambda v: 1 < v < 2, "within (1, 2)")),
    KEY_ODN_REFLECTIONS: ([], _reflections),
    KEY_ODN_FEEDER_LENGTH: (15200.0, _non_negative),
    KEY_ODN_EXCESS_LOSS: (0.0, _non_negative),

    KEY_SWEEP_DELTA_F: (1.55e9, _positive),
    KEY_SWEEP_FREQ: (None, _optional_positive),
    KEY_SWEEP_RAMP_FRACTION: (0.0, _real(lambda v: 0 <= v < 0.5, "within [0, 0.5)")),
    KEY_SWEEP_PHASE_OFFSET: (0.0, _real(lambda v: 0 <= v < 1, "within [0, 1)")),

    KEY_OVERLAP_F_UPPER: (125e6, _non_negative),
    KEY_OVERLAP_LOCK_GUARD: (0.0, _non_negative),
    KEY_OVERLAP_XTALK_BW: (None, _optional_non_negative),

    KEY_PLAN_THRESHOLD: (1.0 / 32, _unit_interval),
    KEY_PLAN_ORACLE_SAMPLES: (65536, _integer(lambda v: v >= 1024, ">= 1024")),

    KEY_SCAN_F_LO: (None, _optional_positive),
    KEY_SCAN_F_HI: (None, _optional_positive),
    KEY_SCAN_F_STEP: (None, _optional_positive),
    KEY_SCAN_POINTS_PER_DECADE: (2000, _integer(lambda v: v >= 1, ">= 1")),
    KEY_SCAN_OSRR: ([0.8, 2.0, 3.0, 5.0, 8.0, 12.0, 20.0],
                    _real_list(_any_real, "a nonempty list of dB values")),
    KEY_SCAN_BUDGET: ([20.0, 22.0, 24.0, 26.0, 28.0, 30.0],
                      _real_list(_non_negative, "a nonempty list of dB values >= 0")),

    KEY_MAP_PI_VALUES: ([0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
                        _real_list(_unit_interval, "values within [0, 1]")),

    KEY_OFDM_N_SUBCARRIERS: (128, _integer(_power_of_two, "a power of two >= 2")),
    KEY_OFDM_BANDWIDTH: (125e6, _positive),
    KEY_OFDM_CONSTELLATION: ('16QAM', _choice(CONSTELLATIONS)),
    KEY_OFDM_CP_FRACTION: (0.0625, _real(lambda v: 0 <= v < 1, "within [0, 1)")),
    KEY_OFDM_PILOT_PERIOD: (16, _integer(lambda v: v >= 1, ">= 1")),
    KEY_OFDM_CENTER_OFFSET: (None, _optional_positive),

    KEY_LINK_LAUNCH_POWER: (3.5, _any_real),
    KEY_LINK_LO_POWER: (4.5, _any_real),
    KEY_LINK_LOSS_BUDGET: (26.8, _non_negative),
    KEY_LINK_OSRR: (5.0, _real(optional=True, expected="dB or null")),
    KEY_LINK_LOCKING_RANGE: (100e6, _positive),
    KEY_LINK_SWEEP_PHASE_ERROR: (0.0, _real(lambda v: -1 < v < 1, "within (-1, 1)")),
    KEY_LINK_LO_MISMATCH: (60e6, _any_real),
    KEY_LINK_LO_DETUNING: (-30e6, _any_real),
    KEY_LINK_CARRIER_RATIO: (6.0, _any_real),
    KEY_LINK_REFLECTION_PHASE: (math.pi / 2, _any_real),
    KEY_LINK_NOISE_DENSITY: (None, _optional_non_negative),
    KEY_LINK_SENSITIVITY: (-24.0, _any_real),
    KEY_LINK_EVM_LIMIT: (12.5, _positive),
    KEY_LINK_EVM_LIMIT_QPSK: (17.5, _positive),
    KEY_LINK_MITIGATION: (True, _boolean),
    KEY_LINK_DURATION: (1.0, _real(lambda v: v >= 1, ">= 1 sweep period")),
    KEY_LINK_SAMPLE_RATE: (4e9, _positive),
    KEY_LINK_SPECTRUM_NPERSEG: (4096, _integer(lambda v: v >= 16, ">= 16")),

    KEY_PILOT_FREQ: (200e6, _positive),
    KEY_PILOT_FREE_RUNNING: (False, _boolean),
    KEY_PILOT_NPERSEG: (1024, _integer(lambda v: v >= 16, ">= 16")),

    KEY_RUN_SEED: (1, _integer(lambda v: 0 <= v < 2 ** 64, "within [0, 2**64)")),
    KEY_RUN_OUT_DIR: ('out', _string),
}


class RunConfig(object):
    """Resolved key/value configuration with builders for the domain types."""

    def __init__(self, data=None):
        self.data = {key: copy.deepcopy(default)
                     for key, (default, _) in _SCHEMA.items()}
        if data:
            self.data.update(data)

    def __getitem__(self, key):
        return self.data[key]

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.data == other.data

    def get(self, key, default=None):
        return self.data.get(key, default)

    def odn(self) -> OdnProfile:
        reflections = tuple(
            ReflectionPoint(item[KEY_REFLECTION_REACH],
                            item[KEY_REFLECTION_REFLECTANCE])
            for item in self[KEY_ODN_REFLECTIONS])
        return OdnProfile(self[KEY_ODN_GROUP_INDEX], reflections,
                          self[KEY_ODN_FEEDER_LENGTH], self[KEY_ODN_EXCESS_LOSS])

    def overlap_spec(self) -> OverlapSpec:
        return OverlapSpec(self[KEY_OVERLAP_F_UPPER], self[KEY_SWEEP_DELTA_F],
                           self[KEY_OVERLAP_LOCK_GUARD], self[KEY_OVERLAP_XTALK_BW])

    def scan_grid(self) -> ScanGrid:
        return ScanGrid(self[KEY_SCAN_F_LO], self[KEY_SCAN_F_HI],
                        self[KEY_SCAN_F_STEP], self[KEY_SCAN_POINTS_PER_DECADE])

    def sweep_waveform(self, sweep_freq=None) -> SweepWaveform:
        freq = self[KEY_SWEEP_FREQ] if sweep_freq is None else sweep_freq
        if freq is None:
            raise ConfigError(KEY_SWEEP_FREQ, "no sweep frequency set or planned",
                              "> 0 Hz")
        return SweepWaveform(self[KEY_SWEEP_DELTA_F], freq,
                             self[KEY_SWEEP_RAMP_FRACTION],
                             self[KEY_SWEEP_PHASE_OFFSET])


def _check_link_layout(data):
    """Cross-key constraints between the sweep, OFDM grid and sample rate."""
    fs = data[KEY_LINK_SAMPLE_RATE]
    n = data[KEY_OFDM_N_SUBCARRIERS]
    bandwidth = data[KEY_OFDM_BANDWIDTH]
    spacing = bandwidth / n
    center = data[KEY_OFDM_CENTER_OFFSET]
    if center is None:
        center = 0.5 * bandwidth + spacing
    top = center + 0.5 * bandwidth
    needed = 2.0 * (data[KEY_SWEEP_DELTA_F] + top)
    if not fs > needed:
        raise ConfigError(KEY_LINK_SAMPLE_RATE,
                          f"too low for a {data[KEY_SWEEP_DELTA_F]:.6g} Hz sweep "
                          f"and a band reaching {top:.6g} Hz",
                          f"> {needed:.6g} Hz")
    ratio = fs / spacing
    fft_size = int(round(ratio))
    if abs(ratio - fft_size) > 1e-6 * ratio:
        raise ConfigError(KEY_LINK_SAMPLE_RATE,
                          f"not an integer multiple of the {spacing:.9g} Hz "
                          f"subcarrier spacing",
                          f"a multiple of {KEY_OFDM_BANDWIDTH} / {KEY_OFDM_N_SUBCARRIERS}")
    k0 = int(round(center / spacing)) - n // 2
    if k0 < 1 or k0 + n >= fft_size // 2:
        path = KEY_OFDM_CENTER_OFFSET if data[KEY_OFDM_CENTER_OFFSET] is not None \
            else KEY_OFDM_BANDWIDTH
        raise ConfigError(path,
                          f"band centered at {center:.6g} Hz does not fit between "
                          f"DC and Nyquist",
                          f"a band within (0, {fs / 2:.6g}) Hz")
    if not data[KEY_PILOT_FREQ] < fs / 2:
        raise ConfigError(KEY_PILOT_FREQ, f"at or above Nyquist ({fs / 2:.6g} Hz)",
                          f"< {fs / 2:.6g} Hz")


def parse_mapping(raw, source='<config>') -> RunConfig:
    """Validate a decoded JSON object and fill in defaults."""
    if not isinstance(raw, dict):
        raise ConfigError('', f"{source} does not hold a JSON object",
                          "an object of dotted keys")
    unknown = sorted(set(raw) - set(_SCHEMA))
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    data = {}
    for key, (default, convert) in _SCHEMA.items():
        if key in raw:
            data[key] = convert(key, raw[key])
        else:
            data[key] = copy.deepcopy(default)
    scan_lo, scan_hi = data[KEY_SCAN_F_LO], data[KEY_SCAN_F_HI]
    if scan_lo is not None and scan_hi is not None and not scan_lo < scan_hi:
        raise ConfigError(KEY_SCAN_F_HI, f"not above {KEY_SCAN_F_LO}",
                          f"> {scan_lo}")
    _check_link_layout(data)
    logger.debug("parsed %d keys from %s (%d defaulted)",
                 len(raw), source, len(_SCHEMA) - len(raw))
    return RunConfig(data)


def parse_config(path) -> RunConfig:
    """Read and validate a configuration file.

    Raises:
        ConfigError: if the file is missing, not JSON, or holds an invalid key.
    """
    if not os.path.isfile(path):
        raise ConfigError(str(path), "configuration file not found")
    try:
        with open(path, 'r', encoding=DEFAULT_ENCODING) as f:
            raw = json.load(f)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ConfigError(str(path), f"not valid JSON: {e}")
    return parse_mapping(raw, source=str(path))


def dump_resolved(cfg: RunConfig, path) -> str:
    """Write every resolved key as sorted JSON; returns the path written."""
    with open(path, 'w', encoding=DEFAULT_ENCODING, newline='\n') as f:
        json.dump(cfg.data, f, indent=2, sort_keys=True)
        f.write('\n')
    return path
