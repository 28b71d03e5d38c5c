"""Matplotlib renderings of the CLI report tables."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .harness import GainMap, RmseResult


def render_trajectory(rows, path):
    """Squint trajectory in the x-y plane, colored by subcarrier index."""
    m = np.array([row[0] for row in rows])
    theta = np.array([row[2] for row in rows])
    r = np.array([row[3] for row in rows])
    fig, ax = plt.subplots(figsize=(6, 5))
    sc = ax.scatter(r * np.cos(theta), r * np.sin(theta), c=m, s=6, cmap="viridis")
    fig.colorbar(sc, ax=ax, label="subcarrier index m")
    ax.plot(r[0] * math.cos(theta[0]), r[0] * math.sin(theta[0]), "k^", label="start")
    ax.plot(r[-1] * math.cos(theta[-1]), r[-1] * math.sin(theta[-1]), "kv", label="end")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title("Beam squint trajectory")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_gain_map(gain: GainMap, m: int, matrix: np.ndarray, path):
    """Heatmap of one subcarrier's normalized gain over the polar grid."""
    radii = gain.grid.radii()
    angles = np.degrees(gain.grid.angles())
    fig, ax = plt.subplots(figsize=(7, 4))
    im = ax.pcolormesh(angles, radii, matrix, shading="auto", cmap="inferno")
    fig.colorbar(im, ax=ax, label="normalized gain")
    ax.set_xlabel("angle (deg)")
    ax.set_ylabel("range (m)")
    ax.set_title(f"Normalized gain, subcarrier m={m}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_localization(true_pts, est_pts, path):
    """True vs estimated user positions in the x-y plane."""
    fig, ax = plt.subplots(figsize=(6, 5))
    for (r, th), (re, te) in zip(true_pts, est_pts):
        ax.plot(r * math.cos(th), r * math.sin(th), "bo", mfc="none")
        ax.plot(re * math.cos(te), re * math.sin(te), "rx")
        ax.plot([r * math.cos(th), re * math.cos(te)],
                [r * math.sin(th), re * math.sin(te)], "k-", lw=0.5, alpha=0.5)
    ax.plot([], [], "bo", mfc="none", label="true")
    ax.plot([], [], "rx", label="estimated")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title("Localization result")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_rmse(results: list[RmseResult], path):
    """Angle and distance RMSE vs SNR on twin log axes."""
    snr = [res.snr_db for res in results]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.semilogy(snr, [math.degrees(res.angle_rmse) for res in results], "o-")
    ax1.set_xlabel("SNR (dB)")
    ax1.set_ylabel("angle RMSE (deg)")
    ax1.grid(True, which="both", alpha=0.3)
    ax2.semilogy(snr, [res.distance_rmse for res in results], "s-")
    ax2.set_xlabel("SNR (dB)")
    ax2.set_ylabel("distance RMSE (m)")
    ax2.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
