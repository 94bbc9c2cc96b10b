SPEED_OF_LIGHT = 299792458.0  # m/s, vacuum
DEFAULT_ENCODING = 'utf-8'

# Configuration keys. Every physical quantity carries its unit in the name.
KEY_ODN_GROUP_INDEX = 'odn.group_index'
KEY_ODN_REFLECTIONS = 'odn.reflections'
KEY_ODN_FEEDER_LENGTH = 'odn.feeder_length_m'
KEY_ODN_EXCESS_LOSS = 'odn.excess_loss_db'
KEY_REFLECTION_REACH = 'reach_m'
KEY_REFLECTION_REFLECTANCE = 'reflectance_db'

KEY_SWEEP_DELTA_F = 'sweep.delta_f_hz'
KEY_SWEEP_FREQ = 'sweep.freq_hz'          # None = use the planned kappa
KEY_SWEEP_RAMP_FRACTION = 'sweep.ramp_fraction'
KEY_SWEEP_PHASE_OFFSET = 'sweep.phase_offset'

KEY_OVERLAP_F_UPPER = 'overlap.f_upper_hz'
KEY_OVERLAP_LOCK_GUARD = 'overlap.lock_guard_hz'
KEY_OVERLAP_XTALK_BW = 'overlap.crosstalk_bandwidth_hz'

KEY_PLAN_THRESHOLD = 'plan.threshold'
KEY_PLAN_ORACLE_SAMPLES = 'plan.oracle_samples'

KEY_SCAN_F_LO = 'scan.f_lo_hz'
KEY_SCAN_F_HI = 'scan.f_hi_hz'
KEY_SCAN_F_STEP = 'scan.f_step_hz'
KEY_SCAN_POINTS_PER_DECADE = 'scan.points_per_decade'
KEY_SCAN_OSRR = 'scan.osrr_db'
KEY_SCAN_BUDGET = 'scan.budget_db'

KEY_MAP_PI_VALUES = 'map.pi_values'

KEY_OFDM_N_SUBCARRIERS = 'ofdm.n_subcarriers'
KEY_OFDM_BANDWIDTH = 'ofdm.bandwidth_hz'
KEY_OFDM_CONSTELLATION = 'ofdm.constellation'
KEY_OFDM_CP_FRACTION = 'ofdm.cyclic_prefix_fraction'
KEY_OFDM_PILOT_PERIOD = 'ofdm.pilot_symbol_period'
KEY_OFDM_CENTER_OFFSET = 'ofdm.center_offset_hz'

KEY_LINK_LAUNCH_POWER = 'link.launch_power_dbm'
KEY_LINK_LO_POWER = 'link.lo_power_dbm'
KEY_LINK_LOSS_BUDGET = 'link.loss_budget_db'
KEY_LINK_OSRR = 'link.osrr_db'            # None = no reflection
KEY_LINK_LOCKING_RANGE = 'link.locking_range_hz'
KEY_LINK_SWEEP_PHASE_ERROR = 'link.sweep_phase_error'
KEY_LINK_LO_MISMATCH = 'link.lo_deviation_mismatch_hz'
KEY_LINK_LO_DETUNING = 'link.lo_free_detuning_hz'
KEY_LINK_CARRIER_RATIO = 'link.carrier_to_signal_db'
KEY_LINK_REFLECTION_PHASE = 'link.reflection_phase_rad'
KEY_LINK_NOISE_DENSITY = 'link.noise_density'  # None = calibrated
KEY_LINK_SENSITIVITY = 'link.sensitivity_dbm'
KEY_LINK_EVM_LIMIT = 'link.evm_limit_pct'
KEY_LINK_EVM_LIMIT_QPSK = 'link.evm_limit_qpsk_pct'
KEY_LINK_MITIGATION = 'link.mitigation_enabled'
KEY_LINK_DURATION = 'link.duration_periods'
KEY_LINK_SAMPLE_RATE = 'link.sample_rate_hz'
KEY_LINK_SPECTRUM_NPERSEG = 'link.spectrum_nperseg'

KEY_PILOT_FREQ = 'pilot.freq_hz'
KEY_PILOT_FREE_RUNNING = 'pilot.free_running'
KEY_PILOT_NPERSEG = 'pilot.nperseg'

KEY_RUN_SEED = 'run.seed'
KEY_RUN_OUT_DIR = 'run.out_dir'

RESOLVED_CONFIG_NAME = 'resolved_config.json'
