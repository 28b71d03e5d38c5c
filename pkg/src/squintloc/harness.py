"""Experiment drivers: trajectory tables, gain maps, power curves, RMSE runs."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .array_model import ArrayConfig, PolarPoint
from .beamforming import SweepPlan, delay_spread
from .sensing import (
    NoiseSpec,
    SensingRange,
    localize_all,
    sweep_amplitudes,
)
from .squint import (
    PolarGrid,
    squint_angle_ps,
    squint_distance_ps,
    td_squint_angle,
    td_squint_distance,
    _grid_power,
)


@dataclass(frozen=True)
class RmseResult:
    """Aggregate localization error at one SNR point."""

    snr_db: float | None
    scenario: str
    angle_rmse: float  # radians
    distance_rmse: float  # meters
    trials: int
    clamp_count: int


@dataclass(frozen=True)
class GainMap:
    """Per-subcarrier matrices of peak-normalized power over a polar grid."""

    grid: PolarGrid
    subcarriers: tuple
    matrices: np.ndarray = field(repr=False)  # (len(subcarriers), n_r, n_theta)


def trajectory_export(plan: SweepPlan):
    """Rows (m, f_m, theta_m, r_m) of the closed-form squint trajectory."""
    cfg = plan.config
    rows = []
    for m in range(cfg.num_subcarriers + 1):
        f_bb = float(cfg.baseband_freq(m))
        rows.append((m, float(cfg.subcarrier_freq(m)),
                     td_squint_angle(plan, f_bb),
                     td_squint_distance(plan, f_bb)))
    return rows


def trajectory_export_ps_only(focus: PolarPoint, config: ArrayConfig):
    """PS-only variant: squint of a plain phase-shifter beamformer at `focus`."""
    f0 = config.lowest_freq
    rows = []
    for m in range(config.num_subcarriers + 1):
        fm = float(config.subcarrier_freq(m))
        rows.append((m, fm,
                     squint_angle_ps(focus.angle, f0, fm),
                     squint_distance_ps(focus.range, focus.angle, f0, fm)))
    return rows


def delay_range_report(plan: SweepPlan) -> tuple[float, float]:
    """(min, max) of the plan's delay-line settings, seconds."""
    return float(plan.delay_profile.min()), float(plan.delay_profile.max())


def gain_map(plan: SweepPlan, grid: PolarGrid, subcarriers) -> GainMap:
    """Peak-normalized power of each selected subcarrier over the grid."""
    subcarriers = tuple(int(m) for m in subcarriers)
    if not subcarriers:
        raise ValueError("empty subcarrier subset")
    mats = []
    for m in subcarriers:
        power = _grid_power(plan, m, grid.radii(), grid.angles(), path_loss=False) ** 2
        mats.append(power / power.max())
    return GainMap(grid=grid, subcarriers=subcarriers, matrices=np.stack(mats))


def user_power_curve(user: PolarPoint, plan: SweepPlan) -> np.ndarray:
    """(M+1, 2) array of (m, peak-normalized noiseless power) at the user."""
    power = sweep_amplitudes(user, plan) ** 2
    power = power / power.max()
    m = np.arange(plan.config.num_subcarriers + 1)
    return np.column_stack([m, power])


def angle_quantization_floor(users, sensing: SensingRange,
                             config: ArrayConfig) -> float:
    """RMS angle error of the noiseless pipeline for fixed users, radians.

    The floor attributable purely to the discrete set of M+1 squint points
    (plus the model bias of the sweep itself); computed by running the
    pipeline without noise.
    """
    estimates, _ = localize_all(users, sensing, config, NoiseSpec(snr_db=None))
    se = [(est.angle - u.angle) ** 2 for est, u in zip(estimates, users)]
    return math.sqrt(sum(se) / len(se))


def _one_trial(args):
    users, sensing, config, noise_seed, snr_db = args
    noise = NoiseSpec(snr_db=snr_db, seed=noise_seed)
    estimates, _ = localize_all(users, sensing, config, noise)
    sq_angle = sum((est.angle - u.angle) ** 2 for est, u in zip(estimates, users))
    sq_dist = sum((est.range - u.range) ** 2 for est, u in zip(estimates, users))
    clamps = sum(1 for est in estimates if est.clamped)
    return sq_angle, sq_dist, clamps


def rmse_experiment(users, sensing: SensingRange, config: ArrayConfig,
                    snr_db_list, trials: int, seed: int,
                    scenario: str = "fixed-users", threads: int = 1):
    """Monte Carlo RMSE over independent noise draws at each SNR.

    Per-trial noise streams are derived from (seed, snr index, trial), so the
    result is bit-reproducible for a fixed seed regardless of thread count:
    trials are aggregated in index order as a sum of squares with one final
    division.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    users = list(users)
    results = []
    n_users = len(users)
    for snr_index, snr_db in enumerate(snr_db_list):
        trial_seeds = [
            int(np.random.SeedSequence([seed, snr_index, t]).generate_state(1)[0])
            for t in range(trials)
        ]
        jobs = [(users, sensing, config, s, snr_db) for s in trial_seeds]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(_one_trial, jobs))
        else:
            outcomes = [_one_trial(j) for j in jobs]
        sq_angle = sum(o[0] for o in outcomes)
        sq_dist = sum(o[1] for o in outcomes)
        clamps = sum(o[2] for o in outcomes)
        denom = trials * n_users
        results.append(RmseResult(
            snr_db=snr_db, scenario=scenario,
            angle_rmse=math.sqrt(sq_angle / denom),
            distance_rmse=math.sqrt(sq_dist / denom),
            trials=trials, clamp_count=clamps,
        ))
    return results


def refine_distance(user: PolarPoint, theta_hat: float, r_coarse: float,
                    sensing: SensingRange, config: ArrayConfig,
                    noise: NoiseSpec, half_width: float = 5.0) -> float:
    """Second, narrow radial sweep around a coarse range estimate.

    Sweeps [r_coarse - half_width, r_coarse + half_width] (clipped to the
    sensing range) so all M+1 squint points concentrate near the user,
    shrinking the quantization step.
    """
    from .beamforming import make_sweep_plan
    from .sensing import estimate_distance, simulate_measurement

    lo = max(sensing.r_min, r_coarse - half_width)
    hi = min(sensing.r_max, r_coarse + half_width)
    plan = make_sweep_plan(PolarPoint(lo, theta_hat), PolarPoint(hi, theta_hat), config)
    rng = np.random.default_rng(np.random.SeedSequence([noise.seed, 3]))
    report = simulate_measurement(user, plan, noise, rng)
    return estimate_distance(report.feedback_index, plan)
