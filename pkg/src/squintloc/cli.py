"""Command-line drivers: trajectory | gainmap | localize | rmse.

Each subcommand reads a scenario file, writes diff-able comma-separated
tables (one '#'-prefixed header line carrying units and a config hash) and,
with --plot, renders matplotlib figures alongside them.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .beamforming import make_sweep_plan
from .harness import (
    delay_range_report,
    gain_map,
    rmse_experiment,
    trajectory_export,
)
from .scenario import Scenario, ScenarioError, load_scenario
from .sensing import NoiseSpec, localize_all
from .squint import DEFAULT_ORACLE_GRID

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_table(path: Path, header_note: str, columns, rows):
    with open(path, "w") as fh:
        fh.write(f"# {header_note}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _sweep_plan(scenario: Scenario):
    if scenario.sweep is None:
        raise ScenarioError("this command needs a 'sweep' section in the scenario")
    start, end = scenario.sweep
    return make_sweep_plan(start, end, scenario.config)


def cmd_trajectory(scenario: Scenario, out: Path, plot: bool) -> int:
    plan = _sweep_plan(scenario)
    rows = trajectory_export(plan)
    t_min, t_max = delay_range_report(plan)
    table = [(m, fm, math.degrees(theta), r) for m, fm, theta, r in rows]
    _write_table(
        out / "trajectory.csv",
        f"squintloc trajectory | config={scenario.config_hash} | "
        f"delay_min_s={t_min:.12g} delay_max_s={t_max:.12g} | "
        "units: f_m_hz=Hz theta_deg=deg r_m=m",
        ("m", "f_m_hz", "theta_deg", "r_m"),
        table,
    )
    if plot:
        from .plots import render_trajectory
        render_trajectory(rows, out / "trajectory.png")
    return EXIT_OK


def cmd_gainmap(scenario: Scenario, out: Path, subcarriers: str, plot: bool) -> int:
    plan = _sweep_plan(scenario)
    cfg = scenario.config
    if subcarriers == "all":
        indices = list(range(cfg.num_subcarriers + 1))
    else:
        indices = [int(tok) for tok in subcarriers.split(",") if tok.strip()]
    grid = scenario.oracle_grid or DEFAULT_ORACLE_GRID
    result = gain_map(plan, grid, indices)
    angles_deg = np.degrees(grid.angles())
    for m, matrix in zip(result.subcarriers, result.matrices):
        path = out / f"gainmap_m{m:05d}.csv"
        note = (
            f"squintloc gainmap m={m} | config={scenario.config_hash} | "
            f"grid: r_m={grid.r_min:.12g}..{grid.r_max:.12g} step {grid.r_step:.12g}, "
            f"theta_deg={math.degrees(grid.theta_min):.12g}.."
            f"{math.degrees(grid.theta_max):.12g} step {math.degrees(grid.theta_step):.12g} | "
            "rows=range, columns=angle, values=normalized power"
        )
        columns = ["r_m"] + [f"{a:.12g}" for a in angles_deg]
        rows = [[r] + [v for v in row] for r, row in zip(grid.radii(), matrix)]
        _write_table(path, note, columns, rows)
        if plot:
            from .plots import render_gain_map
            render_gain_map(result, m, matrix, out / f"gainmap_m{m:05d}.png")
    return EXIT_OK


def cmd_localize(scenario: Scenario, out: Path, plot: bool) -> int:
    if scenario.sensing is None:
        raise ScenarioError("localize needs a 'sensing' section in the scenario")
    noise = NoiseSpec(snr_db=None if scenario.noiseless or not scenario.snr_db_list
                      else scenario.snr_db_list[0],
                      seed=scenario.seed)
    valid, invalid = [], []
    for user_id, user in enumerate(scenario.users):
        (valid if scenario.sensing.contains(user) else invalid).append((user_id, user))
    rows = []
    sweep_count = 0
    if valid:
        estimates, sweep_count = localize_all([u for _, u in valid],
                                              scenario.sensing, scenario.config, noise)
        for (user_id, user), est in zip(valid, estimates):
            rows.append((user_id, user.range, math.degrees(user.angle),
                         est.range, math.degrees(est.angle),
                         est.angle_subcarrier, est.distance_subcarrier, sweep_count))
    for user_id, user in invalid:
        rows.append((user_id, user.range, math.degrees(user.angle),
                     "error", "error", "error", "error", sweep_count))
    rows.sort(key=lambda row: row[0])
    _write_table(
        out / "localize.csv",
        f"squintloc localize | config={scenario.config_hash} | seed={scenario.seed} "
        f"snr_db={'inf' if noise.noiseless else noise.snr_db} | "
        "units: true_r_m=m true_theta_deg=deg est_r_m=m est_theta_deg=deg",
        ("user_id", "true_r_m", "true_theta_deg", "est_r_m", "est_theta_deg",
         "m_angle", "m_distance", "sweep_count"),
        rows,
    )
    if plot and valid:
        from .plots import render_localization
        render_localization(
            [(u.range, u.angle) for _, u in valid],
            [(est.range, est.angle) for est in estimates],
            out / "localize.png",
        )
    if scenario.users and not valid:
        print("error: all users lie outside the sensing range", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_rmse(scenario: Scenario, out: Path, threads: int, plot: bool) -> int:
    if scenario.sensing is None:
        raise ScenarioError("rmse needs a 'sensing' section in the scenario")
    if not scenario.users:
        raise ScenarioError("rmse needs at least one user in the scenario")
    snr_list = list(scenario.snr_db_list)
    if scenario.noiseless or not snr_list:
        snr_list = [None]
    results = rmse_experiment(scenario.users, scenario.sensing, scenario.config,
                              snr_list, scenario.trials, scenario.seed,
                              threads=threads)
    rows = [("inf" if res.snr_db is None else res.snr_db,
             math.degrees(res.angle_rmse), res.distance_rmse,
             res.trials, res.clamp_count) for res in results]
    _write_table(
        out / "rmse.csv",
        f"squintloc rmse | config={scenario.config_hash} | seed={scenario.seed} | "
        "units: angle_rmse_deg=deg distance_rmse_m=m",
        ("snr_db", "angle_rmse_deg", "distance_rmse_m", "trials", "clamps"),
        rows,
    )
    if plot and all(res.snr_db is not None for res in results):
        from .plots import render_rmse
        render_rmse(results, out / "rmse.png")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squintloc",
        description="Near-field beam squint trajectories and squint-based localization",
    )
    parser.add_argument("--scenario", required=True, help="scenario YAML file")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override scenario seed")
    parser.add_argument("--noiseless", action="store_true", help="force noiseless runs")
    parser.add_argument("--threads", type=int, default=1, help="worker threads")
    parser.add_argument("--plot", action="store_true",
                        help="also render figures next to the tables")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("trajectory", help="export the closed-form squint trajectory")
    gm = sub.add_parser("gainmap", help="per-subcarrier gain matrices over a polar grid")
    gm.add_argument("--subcarriers", default="all",
                    help="comma-separated indices, or 'all'")
    sub.add_parser("localize", help="run the two-stage localization pipeline")
    sub.add_parser("rmse", help="Monte Carlo RMSE versus SNR")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
        if args.seed is not None:
            scenario = replace(scenario, seed=args.seed)
        if args.noiseless:
            scenario = replace(scenario, noiseless=True)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "trajectory":
            return cmd_trajectory(scenario, out, args.plot)
        if args.command == "gainmap":
            return cmd_gainmap(scenario, out, args.subcarriers, args.plot)
        if args.command == "localize":
            return cmd_localize(scenario, out, args.plot)
        if args.command == "rmse":
            return cmd_rmse(scenario, out, args.threads, args.plot)
        raise AssertionError(f"unhandled command {args.command}")
    except ScenarioError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
