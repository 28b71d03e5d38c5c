"""Scenario files: human-editable YAML with units spelled out in key names.

Unit bugs are the dominant failure mode in this domain, so every
dimensioned key carries its unit (f0_ghz, r_min_m, theta_max_deg) and
unknown keys are rejected with a closest-match suggestion.
"""

from __future__ import annotations

import difflib
import hashlib
import json
import math
from dataclasses import dataclass

import yaml

from .array_model import ArrayConfig, PolarPoint, SPEED_OF_LIGHT
from .sensing import SensingRange
from .squint import PolarGrid


class ScenarioError(ValueError):
    """Invalid or malformed scenario file."""


_ARRAY_KEYS = {"num_antennas", "spacing", "spacing_m", "f0_ghz",
               "bandwidth_ghz", "num_subcarriers"}
_SENSING_KEYS = {"theta_max_deg", "theta_min_deg", "r_min_m", "r_max_m", "r_mid_m"}
_USER_KEYS = {"r_m", "theta_deg"}
_NOISE_KEYS = {"snr_db_list", "trials", "seed", "noiseless"}
_SWEEP_KEYS = {"start_r_m", "start_theta_deg", "end_r_m", "end_theta_deg"}
_GRID_KEYS = {"r_min_m", "r_max_m", "r_step_m",
              "theta_min_deg", "theta_max_deg", "theta_step_deg"}
_TOP_KEYS = {"array", "sensing", "users", "noise", "sweep", "oracle_grid"}


def _check_keys(mapping: dict, allowed: set, where: str):
    if not isinstance(mapping, dict):
        raise ScenarioError(f"{where}: expected a mapping")
    for key in mapping:
        if key not in allowed:
            hint = difflib.get_close_matches(str(key), sorted(allowed), n=1)
            suggestion = f" (did you mean '{hint[0]}'?)" if hint else ""
            raise ScenarioError(f"{where}: unknown key '{key}'{suggestion}")


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ScenarioError(f"{where}: missing required key '{key}'")
    return mapping[key]


def _number(value, key: str, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}: '{key}' must be a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class Scenario:
    """Everything a CLI run needs, parsed into library types."""

    config: ArrayConfig
    sensing: SensingRange | None
    users: tuple
    snr_db_list: tuple
    trials: int
    seed: int
    noiseless: bool
    sweep: tuple | None  # (start PolarPoint, end PolarPoint)
    oracle_grid: PolarGrid | None
    config_hash: str


def _parse_array(section: dict) -> ArrayConfig:
    _check_keys(section, _ARRAY_KEYS, "array")
    n = _require(section, "num_antennas", "array")
    f0 = _number(_require(section, "f0_ghz", "array"), "f0_ghz", "array") * 1e9
    bw = _number(_require(section, "bandwidth_ghz", "array"), "bandwidth_ghz", "array") * 1e9
    m = _require(section, "num_subcarriers", "array")
    if "spacing_m" in section:
        d = _number(section["spacing_m"], "spacing_m", "array")
    else:
        spacing = section.get("spacing", "half_wavelength")
        if spacing != "half_wavelength":
            raise ScenarioError("array: 'spacing' must be 'half_wavelength' "
                                "(or give 'spacing_m' in meters)")
        d = SPEED_OF_LIGHT / f0 / 2.0
    try:
        return ArrayConfig(num_antennas=int(n), spacing=d, lowest_freq=f0,
                           bandwidth=bw, num_subcarriers=int(m))
    except ValueError as exc:
        raise ScenarioError(f"array: {exc}") from exc


def _parse_sensing(section: dict) -> SensingRange:
    _check_keys(section, _SENSING_KEYS, "sensing")
    try:
        return SensingRange(
            theta_max=math.radians(_number(_require(section, "theta_max_deg", "sensing"),
                                           "theta_max_deg", "sensing")),
            theta_min=math.radians(_number(_require(section, "theta_min_deg", "sensing"),
                                           "theta_min_deg", "sensing")),
            r_min=_number(_require(section, "r_min_m", "sensing"), "r_min_m", "sensing"),
            r_max=_number(_require(section, "r_max_m", "sensing"), "r_max_m", "sensing"),
            r_mid=_number(section.get("r_mid_m", 40.0), "r_mid_m", "sensing"),
        )
    except ValueError as exc:
        raise ScenarioError(f"sensing: {exc}") from exc


def _parse_users(entries) -> tuple:
    if not isinstance(entries, list):
        raise ScenarioError("users: expected a list of {r_m, theta_deg} entries")
    users = []
    for i, entry in enumerate(entries):
        where = f"users[{i}]"
        _check_keys(entry, _USER_KEYS, where)
        r = _number(_require(entry, "r_m", where), "r_m", where)
        theta = _number(_require(entry, "theta_deg", where), "theta_deg", where)
        try:
            users.append(PolarPoint(r, math.radians(theta)))
        except ValueError as exc:
            raise ScenarioError(f"{where}: {exc}") from exc
    return tuple(users)


def _parse_sweep(section: dict) -> tuple:
    _check_keys(section, _SWEEP_KEYS, "sweep")
    try:
        start = PolarPoint(
            _number(_require(section, "start_r_m", "sweep"), "start_r_m", "sweep"),
            math.radians(_number(_require(section, "start_theta_deg", "sweep"),
                                 "start_theta_deg", "sweep")))
        end = PolarPoint(
            _number(_require(section, "end_r_m", "sweep"), "end_r_m", "sweep"),
            math.radians(_number(_require(section, "end_theta_deg", "sweep"),
                                 "end_theta_deg", "sweep")))
    except ValueError as exc:
        raise ScenarioError(f"sweep: {exc}") from exc
    return start, end


def _parse_grid(section: dict) -> PolarGrid:
    _check_keys(section, _GRID_KEYS, "oracle_grid")
    try:
        return PolarGrid(
            r_min=_number(_require(section, "r_min_m", "oracle_grid"), "r_min_m", "oracle_grid"),
            r_max=_number(_require(section, "r_max_m", "oracle_grid"), "r_max_m", "oracle_grid"),
            r_step=_number(_require(section, "r_step_m", "oracle_grid"), "r_step_m", "oracle_grid"),
            theta_min=math.radians(_number(_require(section, "theta_min_deg", "oracle_grid"),
                                           "theta_min_deg", "oracle_grid")),
            theta_max=math.radians(_number(_require(section, "theta_max_deg", "oracle_grid"),
                                           "theta_max_deg", "oracle_grid")),
            theta_step=math.radians(_number(_require(section, "theta_step_deg", "oracle_grid"),
                                            "theta_step_deg", "oracle_grid")),
        )
    except ValueError as exc:
        raise ScenarioError(f"oracle_grid: {exc}") from exc


def load_scenario(path) -> Scenario:
    """Parse and validate a scenario file into library types."""
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ScenarioError(f"malformed YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioError("scenario file must be a YAML mapping")
    _check_keys(raw, _TOP_KEYS, "scenario")

    config = _parse_array(_require(raw, "array", "scenario"))
    sensing = _parse_sensing(raw["sensing"]) if "sensing" in raw else None
    users = _parse_users(raw.get("users", []))

    noise = raw.get("noise", {})
    _check_keys(noise, _NOISE_KEYS, "noise")
    snr_list = noise.get("snr_db_list", [])
    if not isinstance(snr_list, list):
        raise ScenarioError("noise: 'snr_db_list' must be a list")
    snr_db_list = tuple(_number(v, "snr_db_list", "noise") for v in snr_list)
    trials = noise.get("trials", 1)
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        raise ScenarioError("noise: 'trials' must be a positive integer")
    seed = noise.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ScenarioError("noise: 'seed' must be an integer")
    noiseless = bool(noise.get("noiseless", False))

    sweep = _parse_sweep(raw["sweep"]) if "sweep" in raw else None
    grid = _parse_grid(raw["oracle_grid"]) if "oracle_grid" in raw else None

    digest = hashlib.sha256(
        json.dumps(raw, sort_keys=True, default=str).encode()
    ).hexdigest()[:12]
    return Scenario(config=config, sensing=sensing, users=users,
                    snr_db_list=snr_db_list, trials=trials, seed=seed,
                    noiseless=noiseless, sweep=sweep, oracle_grid=grid,
                    config_hash=digest)
