"""Phase-shifter and time-delay beamformer construction and power evaluation.

Phase-shifter values are stored in cycles (applied as exp(-j 2 pi phi)) and
kept unreduced so that the delay derivation stays exact.  Delays are seconds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .array_model import (
    SPEED_OF_LIGHT,
    ArrayConfig,
    PolarPoint,
    antenna_offsets,
    exact_distance,
)

# Spread bound for realizable delay lines; exceeding it is only a warning.
DELAY_SPREAD_BOUND = 100e-9


def ps_profile_for_start(start: PolarPoint, config: ArrayConfig) -> np.ndarray:
    """Phase-shifter cycles phi_n = f0 * r_n(start) / c.

    Focuses the lowest carrier exactly on the start point (exact distances,
    no Fresnel truncation).
    """
    r_n = exact_distance(start, antenna_offsets(config), config.spacing)
    return config.lowest_freq * r_n / SPEED_OF_LIGHT


def td_profile_for_end(end: PolarPoint, phase_profile: np.ndarray,
                       config: ArrayConfig) -> np.ndarray:
    """Delay seconds t_n = f_M r_n(end) / (W c) - phi_n / W.

    Focuses the highest carrier on the end point given the already-fixed
    phase profile.  Values may be negative for some geometries; received
    powers are invariant to a common delay offset, so they are kept as-is.
    """
    r_n = exact_distance(end, antenna_offsets(config), config.spacing)
    f_top = config.highest_freq
    t_n = f_top * r_n / (config.bandwidth * SPEED_OF_LIGHT) - phase_profile / config.bandwidth
    spread = float(t_n.max() - t_n.min())
    if spread >= DELAY_SPREAD_BOUND:
        warnings.warn(
            f"delay spread {spread * 1e9:.1f} ns exceeds the hardware bound "
            f"{DELAY_SPREAD_BOUND * 1e9:.0f} ns",
            stacklevel=2,
        )
    return t_n


@dataclass(frozen=True)
class SweepPlan:
    """A configured squint trajectory between two focus points.

    The phase profile pins the lowest carrier on `start`; the delay profile
    pins the highest carrier on `end`.  Intermediate subcarriers squint
    between the two along the closed-form trajectory.
    """

    start: PolarPoint
    end: PolarPoint
    phase_profile: np.ndarray = field(repr=False)
    delay_profile: np.ndarray = field(repr=False)
    config: ArrayConfig


def make_sweep_plan(start: PolarPoint, end: PolarPoint, config: ArrayConfig) -> SweepPlan:
    """Build the phase and delay profiles for a start -> end squint sweep."""
    phases = ps_profile_for_start(start, config)
    delays = td_profile_for_end(end, phases, config)
    return SweepPlan(start=start, end=end, phase_profile=phases,
                     delay_profile=delays, config=config)


def ps_beamformer(phase_profile: np.ndarray) -> np.ndarray:
    """Unit-norm weights (1/sqrt(N)) exp(-j 2 pi phi_n)."""
    n = len(phase_profile)
    return np.exp(-2j * np.pi * phase_profile) / np.sqrt(n)


def td_beamformer(phase_profile: np.ndarray, delay_profile: np.ndarray,
                  baseband_freq: float) -> np.ndarray:
    """TD-augmented weights; reduces to ps_beamformer at baseband 0.

    Entry n is (1/sqrt(N)) exp(-j 2 pi (phi_n + f_bb * t_n)): the delay
    line contributes a phase growing linearly with baseband frequency.
    """
    n = len(phase_profile)
    total_cycles = phase_profile + baseband_freq * delay_profile
    return np.exp(-2j * np.pi * total_cycles) / np.sqrt(n)


def received_power(h: np.ndarray, w: np.ndarray) -> float:
    """|h^H w|, the beamforming amplitude of channel h under weights w."""
    if h.shape != w.shape:
        raise ValueError(f"length mismatch: channel {h.shape} vs weights {w.shape}")
    return float(np.abs(np.vdot(h, w)))


def delay_spread(plan: SweepPlan) -> float:
    """max(t_n) - min(t_n) over the plan's delay profile, seconds."""
    return float(plan.delay_profile.max() - plan.delay_profile.min())
