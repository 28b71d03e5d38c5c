"""Near-field wideband beam squint simulation and squint-based user localization.

A uniform linear array with one RF chain, per-antenna phase shifters and
time-delay lines sweeps its frequency-dependent focal point across an OFDM
band.  Users report the subcarrier index where they receive peak power, and
the base station inverts the closed-form squint trajectory to recover each
user's angle and range.
"""

from .array_model import (
    SPEED_OF_LIGHT,
    ArrayConfig,
    CartesianPoint,
    PolarPoint,
    antenna_offsets,
    channel_vector,
    exact_distance,
    fresnel_distance,
    rayleigh_distance,
)
from .beamforming import (
    SweepPlan,
    delay_spread,
    make_sweep_plan,
    ps_beamformer,
    ps_profile_for_start,
    received_power,
    td_beamformer,
    td_profile_for_end,
)
from .squint import (
    PolarGrid,
    SquintPoint,
    brute_force_focus,
    squint_angle_ps,
    squint_distance_ps,
    subcarrier_for_angle,
    subcarrier_for_distance,
    td_squint_angle,
    td_squint_distance,
)
from .sensing import (
    LocalizationEstimate,
    MeasurementReport,
    NoiseSpec,
    SensingRange,
    estimate_angle,
    estimate_distance,
    group_by_feedback,
    localize_all,
    plan_angle_sweep,
    plan_distance_sweep,
    simulate_measurement,
    sweep_amplitudes,
)
from .harness import (
    GainMap,
    RmseResult,
    angle_quantization_floor,
    delay_range_report,
    gain_map,
    refine_distance,
    rmse_experiment,
    trajectory_export,
    trajectory_export_ps_only,
    user_power_curve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
