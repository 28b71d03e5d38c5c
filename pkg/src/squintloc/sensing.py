"""Two-stage squint-based localization: sweep, feed back, invert.

Stage 1 sweeps the beam focus across the angular sensing range at a fixed
mid range; every user reports the subcarrier index where it saw peak power
and the closed-form angle trajectory is inverted at that index.  Stage 2
repeats per distinct angle with a radial sweep to recover ranges.  Powers
are evaluated phase-only: the protocol only compares subcarriers against
each other for a single user, so envelope factors common to the comparison
carry no information and would only bias the flat distance peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .array_model import SPEED_OF_LIGHT, ArrayConfig, PolarPoint, antenna_offsets, exact_distance
from .beamforming import SweepPlan, make_sweep_plan
from .squint import td_squint_angle, td_squint_distance


@dataclass(frozen=True)
class SensingRange:
    """Sector to be sensed plus the mid range used by the angle sweep."""

    theta_max: float
    theta_min: float
    r_min: float
    r_max: float
    r_mid: float = 40.0

    def __post_init__(self):
        if self.theta_min >= self.theta_max:
            raise ValueError("theta_min must be below theta_max")
        if not 0 < self.r_min < self.r_mid < self.r_max:
            raise ValueError("need 0 < r_min < r_mid < r_max")

    def contains(self, p: PolarPoint) -> bool:
        return (self.r_min <= p.range <= self.r_max
                and self.theta_min <= p.angle <= self.theta_max)


@dataclass(frozen=True)
class NoiseSpec:
    """Receiver noise model: unit-variance complex Gaussian, SNR-scaled signal.

    snr_db=None means noiseless.  The linear SNR is defined as the peak
    noiseless per-subcarrier sample power divided by the noise variance.
    """

    snr_db: float | None
    seed: int = 0

    @property
    def noiseless(self) -> bool:
        return self.snr_db is None

    @property
    def snr_linear(self) -> float:
        if self.snr_db is None:
            return math.inf
        return 10.0 ** (self.snr_db / 10.0)


@dataclass(frozen=True)
class MeasurementReport:
    """Per-subcarrier received power samples and the fed-back argmax index."""

    user_id: int
    samples: np.ndarray = field(repr=False)
    feedback_index: int


@dataclass(frozen=True)
class LocalizationEstimate:
    """Angle (and, after stage 2, range) estimate for one user."""

    user_id: int
    angle: float
    range: float | None
    angle_subcarrier: int
    distance_subcarrier: int | None
    clamped: bool = False


def plan_angle_sweep(sensing: SensingRange, config: ArrayConfig) -> SweepPlan:
    """Angle-stage sweep: (r_mid, theta_max) -> (r_mid, theta_min)."""
    return make_sweep_plan(PolarPoint(sensing.r_mid, sensing.theta_max),
                           PolarPoint(sensing.r_mid, sensing.theta_min), config)


def plan_distance_sweep(theta_hat: float, sensing: SensingRange,
                        config: ArrayConfig) -> SweepPlan:
    """Distance-stage radial sweep: (r_min, theta_hat) -> (r_max, theta_hat)."""
    if not sensing.theta_min <= theta_hat <= sensing.theta_max:
        raise ValueError("estimated angle outside the sensing range")
    return make_sweep_plan(PolarPoint(sensing.r_min, theta_hat),
                           PolarPoint(sensing.r_max, theta_hat), config)


def sweep_amplitudes(user: PolarPoint, plan: SweepPlan,
                     path_loss: bool = False) -> np.ndarray:
    """Noiseless received amplitude at the user for every subcarrier.

    Vectorized over the M+1 tones; phase-only by default (see module
    docstring).  With path_loss=True the per-antenna 1/r_n taper and the
    sqrt(beta(f_m)) envelope are included.
    """
    cfg = plan.config
    r_n = exact_distance(user, antenna_offsets(cfg), cfg.spacing)
    m = np.arange(cfg.num_subcarriers + 1)
    fm = cfg.subcarrier_freq(m)
    f_bb = cfg.baseband_freq(m)
    cycles = (np.outer(fm, r_n) / SPEED_OF_LIGHT
              - plan.phase_profile[None, :]
              - np.outer(f_bb, plan.delay_profile))
    field = np.exp(2j * np.pi * cycles)
    if path_loss:
        field = field / r_n[None, :]
    amplitude = np.abs(field.sum(axis=1)) / np.sqrt(cfg.num_antennas)
    if path_loss:
        amplitude = amplitude * (SPEED_OF_LIGHT / (4 * np.pi * fm))
    return amplitude


def _argmax_lowest(samples: np.ndarray) -> int:
    # np.argmax already returns the lowest index among exact ties
    return int(np.argmax(samples))


def simulate_measurement(user: PolarPoint, plan: SweepPlan, noise: NoiseSpec,
                         rng: np.random.Generator | None = None,
                         user_id: int = 0,
                         amplitudes: np.ndarray | None = None) -> MeasurementReport:
    """One user's per-subcarrier power samples plus its argmax feedback.

    Each sample is |sqrt(rho) a_m e^{j psi_m} + n_m|^2 with a uniform pilot
    phase psi_m, standard complex Gaussian n_m and rho chosen so the peak
    noiseless sample power over the noise variance equals the linear SNR.
    Noiseless mode bypasses the phase and the noise entirely.

    Precomputed `amplitudes` may be passed to skip the channel evaluation
    (they must match `sweep_amplitudes(user, plan)`).
    """
    a = sweep_amplitudes(user, plan) if amplitudes is None else amplitudes
    if noise.noiseless:
        samples = a**2
    else:
        if rng is None:
            rng = np.random.default_rng(noise.seed)
        rho = noise.snr_linear / float(a.max()) ** 2
        psi = rng.uniform(0.0, 2.0 * np.pi, a.shape)
        n = (rng.standard_normal(a.shape)
             + 1j * rng.standard_normal(a.shape)) / np.sqrt(2.0)
        samples = np.abs(np.sqrt(rho) * a * np.exp(1j * psi) + n) ** 2
    return MeasurementReport(user_id=user_id, samples=samples,
                             feedback_index=_argmax_lowest(samples))


def estimate_angle(feedback_index: int, plan: SweepPlan) -> float:
    """Invert the angle trajectory at the fed-back subcarrier index."""
    cfg = plan.config
    if not 0 <= feedback_index <= cfg.num_subcarriers:
        raise ValueError("feedback index out of range")
    return td_squint_angle(plan, float(cfg.baseband_freq(feedback_index)))


def estimate_distance(feedback_index: int, plan: SweepPlan) -> float:
    """Invert the radial trajectory at the fed-back subcarrier index."""
    cfg = plan.config
    if not 0 <= feedback_index <= cfg.num_subcarriers:
        raise ValueError("feedback index out of range")
    return td_squint_distance(plan, float(cfg.baseband_freq(feedback_index)))


def group_by_feedback(feedback_indices) -> dict[int, list[int]]:
    """Group user positions by equal angle-stage feedback index.

    Users sharing a feedback subcarrier are indistinguishable in angle and
    share one distance sweep.  Returns {feedback_index: [user ids]} with
    groups in first-seen order.
    """
    groups: dict[int, list[int]] = {}
    for user_id, m in enumerate(feedback_indices):
        groups.setdefault(int(m), []).append(user_id)
    return groups


def _user_rng(master_seed: int, user_id: int, stage: int) -> np.random.Generator:
    # independent stream per (user, stage); deterministic under any scheduling
    return np.random.default_rng(np.random.SeedSequence([master_seed, user_id, stage]))


def localize_all(users, sensing: SensingRange, config: ArrayConfig,
                 noise: NoiseSpec):
    """Full two-stage pipeline: one angle sweep plus one radial sweep per group.

    Returns (estimates, sweep_count).  Estimates are clamped to the sensing
    range (noisy feedback can land on boundary subcarriers); clamping is
    flagged per user.
    """
    users = list(users)
    for u in users:
        if not sensing.contains(u):
            raise ValueError(f"user {u} outside the sensing range")
    angle_plan = plan_angle_sweep(sensing, config)
    feedback = []
    for user_id, u in enumerate(users):
        rng = _user_rng(noise.seed, user_id, 1)
        report = simulate_measurement(u, angle_plan, noise, rng, user_id=user_id)
        feedback.append(report.feedback_index)
    groups = group_by_feedback(feedback)

    estimates: list[LocalizationEstimate | None] = [None] * len(users)
    sweep_count = 1
    for m_angle, members in groups.items():
        theta_hat = estimate_angle(m_angle, angle_plan)
        clamped_angle = not (sensing.theta_min <= theta_hat <= sensing.theta_max)
        theta_hat = min(max(theta_hat, sensing.theta_min), sensing.theta_max)
        radial_plan = plan_distance_sweep(theta_hat, sensing, config)
        sweep_count += 1
        for user_id in members:
            rng = _user_rng(noise.seed, user_id, 2)
            report = simulate_measurement(users[user_id], radial_plan, noise,
                                          rng, user_id=user_id)
            r_hat = estimate_distance(report.feedback_index, radial_plan)
            clamped = clamped_angle or not (sensing.r_min <= r_hat <= sensing.r_max)
            r_hat = min(max(r_hat, sensing.r_min), sensing.r_max)
            estimates[user_id] = LocalizationEstimate(
                user_id=user_id, angle=theta_hat, range=r_hat,
                angle_subcarrier=m_angle,
                distance_subcarrier=report.feedback_index,
                clamped=clamped,
            )
    return estimates, sweep_count
