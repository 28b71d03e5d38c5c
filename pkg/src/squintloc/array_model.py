"""ULA geometry, propagation distances and near-field LoS channel vectors.

The array lies on the y-axis with antenna n at (0, n*d) for
n = -(N-1)/2, ..., (N-1)/2; users live in the right half-plane (x > 0).
All angles are radians internally, measured from broadside (the x-axis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 3e8  # m/s, rounded convention used throughout


@dataclass(frozen=True)
class ArrayConfig:
    """ULA geometry plus the OFDM frequency grid.

    The grid has num_subcarriers + 1 tones: tone m sits at
    f0 + m * bandwidth / num_subcarriers, so tone 0 is the lowest carrier
    and the last tone is f0 + bandwidth.
    """

    num_antennas: int
    spacing: float  # m
    lowest_freq: float  # Hz
    bandwidth: float  # Hz
    num_subcarriers: int

    def __post_init__(self):
        if self.num_antennas < 2:
            raise ValueError("num_antennas must be >= 2")
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")
        if self.lowest_freq <= 0:
            raise ValueError("lowest_freq must be positive")
        if self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        if self.num_subcarriers < 1:
            raise ValueError("num_subcarriers must be >= 1")

    @property
    def aperture(self) -> float:
        """Physical aperture (N - 1) * d in meters."""
        return (self.num_antennas - 1) * self.spacing

    @property
    def highest_freq(self) -> float:
        return self.lowest_freq + self.bandwidth

    def subcarrier_freq(self, m) -> np.ndarray | float:
        """Passband frequency of tone m (scalar or array)."""
        return self.lowest_freq + np.asarray(m) * self.bandwidth / self.num_subcarriers

    def baseband_freq(self, m) -> np.ndarray | float:
        """Baseband offset of tone m from the lowest carrier."""
        return np.asarray(m) * self.bandwidth / self.num_subcarriers


@dataclass(frozen=True)
class PolarPoint:
    """Position as (range, angle): range in meters, angle in radians."""

    range: float
    angle: float

    def __post_init__(self):
        if self.range <= 0:
            raise ValueError("range must be positive")
        if not -math.pi / 2 < self.angle < math.pi / 2:
            raise ValueError("angle must lie in (-pi/2, pi/2)")

    @property
    def x(self) -> float:
        return self.range * math.cos(self.angle)

    @property
    def y(self) -> float:
        return self.range * math.sin(self.angle)

    def to_cartesian(self) -> "CartesianPoint":
        return CartesianPoint(self.x, self.y)


@dataclass(frozen=True)
class CartesianPoint:
    """Position as (x, y); the array is on the y-axis so x must be positive."""

    x: float
    y: float

    def __post_init__(self):
        if self.x <= 0:
            raise ValueError("x must be positive (right half-plane)")

    def to_polar(self) -> PolarPoint:
        return PolarPoint(math.hypot(self.x, self.y), math.atan2(self.y, self.x))


def antenna_offsets(config: ArrayConfig) -> np.ndarray:
    """Dimensionless antenna indices -(N-1)/2 ... (N-1)/2.

    Half-integers for even N, kept exact.
    """
    n = config.num_antennas
    return np.arange(n) - (n - 1) / 2.0


def exact_distance(point, n, spacing: float):
    """Distance from antenna offset(s) n to a point, sqrt(x^2 + (y - n d)^2).

    Accepts PolarPoint or CartesianPoint; n may be a scalar or an array.
    """
    if isinstance(point, PolarPoint):
        x, y = point.x, point.y
    else:
        x, y = point.x, point.y
    return np.sqrt(x**2 + (y - np.asarray(n) * spacing) ** 2)


def fresnel_distance(point: PolarPoint, n, spacing: float):
    """Second-order (Fresnel) expansion of the antenna-to-point distance.

    r - n d sin(theta) + (n d cos(theta))^2 / (2 r).  Every closed-form
    squint expression in this package is derived under this approximation.
    """
    nd = np.asarray(n) * spacing
    r, theta = point.range, point.angle
    return r - nd * math.sin(theta) + (nd * math.cos(theta)) ** 2 / (2 * r)


def rayleigh_distance(config: ArrayConfig, wavelength: float | None = None) -> float:
    """Near/far-field boundary 2 (N d)^2 / lambda.

    The aperture is taken as N*d (the (N-1)d ~ Nd convention).  By default
    the wavelength is c / lowest_freq; pass `wavelength` to override.
    """
    if wavelength is None:
        wavelength = SPEED_OF_LIGHT / config.lowest_freq
    aperture = config.num_antennas * config.spacing
    return 2 * aperture**2 / wavelength


def channel_vector(point, freq: float, config: ArrayConfig,
                   path_loss: bool = True) -> np.ndarray:
    """Near-field LoS channel, one complex entry per antenna.

    Entry n is sqrt(beta(f)) * exp(-j 2 pi f r_n / c) / r_n with the
    free-space loss beta(f)/r_n^2 = (c / (4 pi f r_n))^2, so each entry
    has magnitude c / (4 pi f r_n).  With path_loss=False the magnitudes
    are all 1 (phase-only channel).
    """
    offsets = antenna_offsets(config)
    r_n = exact_distance(point, offsets, config.spacing)
    phase = np.exp(-2j * np.pi * freq * r_n / SPEED_OF_LIGHT)
    if not path_loss:
        return phase
    amplitude = SPEED_OF_LIGHT / (4 * np.pi * freq * r_n)
    return amplitude * phase
