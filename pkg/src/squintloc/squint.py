"""Closed-form squint trajectories, their inverses, and the grid argmax oracle.

The closed forms describe where subcarrier m's beamforming gain peaks:
a phase-shifter-only beamformer squints along an (angle, range) curve fixed
by the focus point, while a phase-shifter + time-delay sweep squints along a
trajectory pinned at both ends.  `brute_force_focus` is the independent
numerical arbiter: an exhaustive gain maximization over a polar grid that
must agree with the closed forms wherever the Fresnel picture holds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .array_model import SPEED_OF_LIGHT, antenna_offsets
from .beamforming import SweepPlan

ARCSIN_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class SquintPoint:
    """Focus of subcarrier m: (range, angle) where its gain peaks."""

    m: int
    range: float
    angle: float


@dataclass(frozen=True)
class PolarGrid:
    """Uniform polar scan grid for the brute-force oracle."""

    r_min: float
    r_max: float
    r_step: float
    theta_min: float
    theta_max: float
    theta_step: float

    def __post_init__(self):
        if not (self.r_min < self.r_max and self.theta_min < self.theta_max):
            raise ValueError("grid bounds must be increasing")
        if self.r_step <= 0 or self.theta_step <= 0:
            raise ValueError("grid steps must be positive")

    def radii(self) -> np.ndarray:
        return np.arange(self.r_min, self.r_max + self.r_step / 2, self.r_step)

    def angles(self) -> np.ndarray:
        return np.arange(self.theta_min, self.theta_max + self.theta_step / 2,
                         self.theta_step)


#: Field-scan defaults: electromagnetic distance to Rayleigh distance by
#: 0.4 m, broadside +-90 degrees by 0.5 degrees.
DEFAULT_ORACLE_GRID = PolarGrid(
    r_min=3.17, r_max=81.92, r_step=0.4,
    theta_min=math.radians(-90.0), theta_max=math.radians(90.0),
    theta_step=math.radians(0.5),
)


def squint_angle_ps(theta0: float, f0: float, fm: float) -> float:
    """PS-only squint angle: arcsin((f0/fm) sin(theta0)).

    The argument is always within [-1, 1] for fm >= f0.
    """
    return math.asin(f0 / fm * math.sin(theta0))


def squint_distance_ps(r0: float, theta0: float, f0: float, fm: float) -> float:
    """PS-only squint range r0 * (fm/f0) * cos^2(theta_m) / cos^2(theta0).

    Grows with fm; validated against the grid oracle (see tests).
    """
    if abs(math.cos(theta0)) < 1e-12:
        raise ValueError("degenerate focus angle +-pi/2")
    theta_m = squint_angle_ps(theta0, f0, fm)
    return r0 * (fm / f0) * math.cos(theta_m) ** 2 / math.cos(theta0) ** 2


def _clamped_arcsin(arg: float) -> float:
    if abs(arg) > 1.0:
        if abs(arg) - 1.0 > ARCSIN_CLAMP_TOL:
            raise ValueError(f"arcsin argument {arg} outside [-1, 1]")
        warnings.warn(f"clamping arcsin argument {arg} to unit range", stacklevel=3)
        arg = math.copysign(1.0, arg)
    return math.asin(arg)


def td_squint_angle(plan: SweepPlan, baseband_freq: float) -> float:
    """Squint angle of a TD-assisted sweep at baseband frequency f_bb.

    sin(theta_m) interpolates between the endpoint sines with weights
    (W - f_bb) f0 and (W + f0) f_bb over W * fm; at f_bb = 0 it returns the
    start angle and at f_bb = W the end angle.
    """
    cfg = plan.config
    w, f0 = cfg.bandwidth, cfg.lowest_freq
    fm = f0 + baseband_freq
    s0 = math.sin(plan.start.angle)
    sc = math.sin(plan.end.angle)
    arg = ((w - baseband_freq) * f0 * s0 + (w + f0) * baseband_freq * sc) / (w * fm)
    return _clamped_arcsin(arg)


def td_squint_distance(plan: SweepPlan, baseband_freq: float) -> float:
    """Squint range of a TD-assisted sweep at baseband frequency f_bb.

    Harmonic interpolation of the endpoint ranges: 1/r_m is a convex
    combination of 1/r0 and 1/rc weighted by the same frequency factors as
    the angle formula, each scaled by cos^2(theta_endpoint)/cos^2(theta_m).
    """
    cfg = plan.config
    w, f0 = cfg.bandwidth, cfg.lowest_freq
    fm = f0 + baseband_freq
    theta_m = td_squint_angle(plan, baseband_freq)
    cos2_m = math.cos(theta_m) ** 2
    weight0 = (w - baseband_freq) * f0 / (w * fm) * math.cos(plan.start.angle) ** 2 / cos2_m
    weightc = (w + f0) * baseband_freq / (w * fm) * math.cos(plan.end.angle) ** 2 / cos2_m
    return 1.0 / (weight0 / plan.start.range + weightc / plan.end.range)


def _round_half_down(x: float) -> int:
    # nearest integer, ties toward the lower index
    return int(math.ceil(x - 0.5))


def subcarrier_for_angle(theta: float, plan: SweepPlan) -> int:
    """Subcarrier index whose squint angle is closest to theta (closed form).

    Inverts the angle trajectory, which is linear-fractional in baseband
    frequency, and rounds to the nearest index (ties toward the lower one).
    """
    cfg = plan.config
    w, f0 = cfg.bandwidth, cfg.lowest_freq
    s0 = math.sin(plan.start.angle)
    sc = math.sin(plan.end.angle)
    s = math.sin(theta)
    lo, hi = min(s0, sc), max(s0, sc)
    if not lo - 1e-12 <= s <= hi + 1e-12:
        raise ValueError("target angle outside the sweep's angle span")
    denom = w * s + f0 * s0 - (w + f0) * sc
    if denom == 0.0:
        return 0  # degenerate: constant-angle sweep, every index matches
    f_bb = w * f0 * (s0 - s) / denom
    m = _round_half_down(f_bb * cfg.num_subcarriers / w)
    return int(np.clip(m, 0, cfg.num_subcarriers))


def subcarrier_for_distance(r: float, plan: SweepPlan) -> int:
    """Subcarrier index whose squint range is closest to r on a radial plan.

    Requires equal start/end angles (the cos^2 factors cancel, leaving a
    linear equation in baseband frequency).
    """
    cfg = plan.config
    if not math.isclose(plan.start.angle, plan.end.angle, abs_tol=1e-12):
        raise ValueError("radial inversion requires equal start and end angles")
    r0, rc = plan.start.range, plan.end.range
    lo, hi = min(r0, rc), max(r0, rc)
    if not lo - 1e-9 <= r <= hi + 1e-9:
        raise ValueError("target range outside the sweep's range span")
    w, f0 = cfg.bandwidth, cfg.lowest_freq
    denom = w / r + f0 / r0 - (w + f0) / rc
    if denom == 0.0:
        return 0  # degenerate: fixed-focus sweep
    f_bb = w * f0 * (1.0 / r0 - 1.0 / r) / denom
    m = _round_half_down(f_bb * cfg.num_subcarriers / w)
    return int(np.clip(m, 0, cfg.num_subcarriers))


def _grid_power(plan: SweepPlan, m: int, radii: np.ndarray, angles: np.ndarray,
                path_loss: bool) -> np.ndarray:
    """Received amplitude of subcarrier m at every (r, theta) grid point.

    Returns a (len(radii), len(angles)) array.  Phase-only by default so the
    focal structure is not masked by the 1/r path-loss envelope.
    """
    cfg = plan.config
    fm = float(cfg.subcarrier_freq(m))
    f_bb = float(cfg.baseband_freq(m))
    offsets = antenna_offsets(cfg)
    r_grid, t_grid = np.meshgrid(radii, angles, indexing="ij")
    x = (r_grid * np.cos(t_grid)).ravel()
    y = (r_grid * np.sin(t_grid)).ravel()
    r_n = np.sqrt(x[:, None] ** 2 + (y[:, None] - offsets * cfg.spacing) ** 2)
    cycles = fm * r_n / SPEED_OF_LIGHT - plan.phase_profile - f_bb * plan.delay_profile
    field = np.exp(2j * np.pi * cycles)
    if path_loss:
        field = field / r_n
    power = np.abs(field.sum(axis=1)) / np.sqrt(cfg.num_antennas)
    return power.reshape(r_grid.shape)


def brute_force_focus(plan: SweepPlan, m: int, grid: PolarGrid | None = None,
                      refine: bool = True, path_loss: bool = False) -> SquintPoint:
    """Grid argmax of subcarrier m's received power: the numerical oracle.

    Scans the coarse grid, then (by default) re-scans a 5x5-step
    neighborhood of the winner at 10x resolution.  Ties break toward the
    smallest range, then the smallest angle, so the result is deterministic
    regardless of evaluation order.
    """
    if grid is None:
        grid = DEFAULT_ORACLE_GRID
    radii, angles = grid.radii(), grid.angles()
    if radii.size == 0 or angles.size == 0:
        raise ValueError("empty oracle grid")
    power = _grid_power(plan, m, radii, angles, path_loss)
    # row-major argmax = first max in (r, theta) order = smallest r then theta
    i, j = np.unravel_index(int(np.argmax(power)), power.shape)
    r_best, t_best = radii[i], angles[j]
    if refine:
        r_fine = np.arange(max(grid.r_min, r_best - 5 * grid.r_step),
                           min(grid.r_max, r_best + 5 * grid.r_step) + grid.r_step / 20,
                           grid.r_step / 10)
        t_fine = np.arange(max(grid.theta_min, t_best - 5 * grid.theta_step),
                           min(grid.theta_max, t_best + 5 * grid.theta_step) + grid.theta_step / 20,
                           grid.theta_step / 10)
        power = _grid_power(plan, m, r_fine, t_fine, path_loss)
        i, j = np.unravel_index(int(np.argmax(power)), power.shape)
        r_best, t_best = r_fine[i], t_fine[j]
    return SquintPoint(m=m, range=float(r_best), angle=float(t_best))
