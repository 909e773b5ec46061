"""Flat key-value scenario files for the command line.

Grammar, one assignment per line::

    # comment (also allowed after a value)
    mode = flat
    schedulers = dos-max, maxsnr, mingi     # comma list
    snr_db = 0:30:5                         # inclusive start:stop:step range
    eta_I = 0.5

Unknown keys, duplicates and malformed values are rejected with the line
number. Numeric axes accept a single value, a comma list, or a range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .harness import MODES, SweepSpec
from .scheduling import SCHEDULERS

__all__ = ["ConfigError", "ScenarioConfig", "parse_scenario", "parse_scenario_text"]


class ConfigError(ValueError):
    """Scenario file problem; message carries the offending line when known."""


@dataclass
class ScenarioConfig:
    spec: SweepSpec
    out: str | None = None


# key -> parser kind
_KEYS = {
    "mode": "str",
    "schedulers": "str_list",
    "k": "int_list",
    "n": "int_list",
    "snr_db": "float_list",
    "tx_power_dbm": "float_list",
    "eta_i": "float_list",
    "eta_tr": "auto_or_float",
    "epsilon": "float",
    "trials": "int",
    "seed": "int",
    "beta_cross": "float",
    "interference_includes_snr": "bool",
    "cell_radius_m": "float",
    "pl_exponent": "float",
    "shadow_std_db": "float",
    "noise_dbm": "float",
    "out": "str",
}

_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _parse_float_list(text: str, lineno: int) -> tuple[float, ...]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"line {lineno}: range must be start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"line {lineno}: range bounds must be numbers") from None
        if step <= 0 or stop < start:
            raise ConfigError(f"line {lineno}: range needs step > 0 and stop >= start")
        values = np.arange(start, stop + step / 2.0, step)
        return tuple(float(v) for v in np.round(values, 10))
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(f"line {lineno}: expected a number, list, or range") from None


def _parse_value(kind: str, text: str, lineno: int):
    if kind == "str":
        return text
    if kind == "str_list":
        return tuple(p.strip() for p in text.split(",") if p.strip())
    if kind == "int":
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"line {lineno}: expected an integer, got {text!r}") from None
    if kind == "int_list":
        try:
            return tuple(int(p) for p in text.split(","))
        except ValueError:
            raise ConfigError(f"line {lineno}: expected integers, got {text!r}") from None
    if kind == "float":
        try:
            return float(text)
        except ValueError:
            raise ConfigError(f"line {lineno}: expected a number, got {text!r}") from None
    if kind == "float_list":
        return _parse_float_list(text, lineno)
    if kind == "bool":
        flag = _BOOL.get(text.lower())
        if flag is None:
            raise ConfigError(f"line {lineno}: expected true/false, got {text!r}")
        return flag
    if kind == "auto_or_float":
        if text.lower() == "auto":
            return None
        try:
            return float(text)
        except ValueError:
            raise ConfigError(f"line {lineno}: expected 'auto' or a number") from None
    raise AssertionError(kind)


def parse_scenario_text(text: str) -> ScenarioConfig:
    """Parse scenario file contents into a validated sweep description."""
    seen: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        seen[key] = _parse_value(_KEYS[key], value, lineno)

    out = seen.pop("out", None)
    fields = {}
    rename = {"k": "K", "n": "N", "eta_i": "eta_I", "seed": "master_seed"}
    for key, value in seen.items():
        fields[rename.get(key, key)] = value
    try:
        spec = SweepSpec(**fields)
        spec.validate()
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    _check_scheduler_names(spec)
    return ScenarioConfig(spec=spec, out=out)


def _check_scheduler_names(spec: SweepSpec) -> None:
    # validate() already covers this; kept for a friendlier aggregate message
    bad = [s for s in spec.schedulers if s not in SCHEDULERS]
    if bad:
        raise ConfigError(f"unknown schedulers {bad}; valid names: {', '.join(SCHEDULERS)}")
    if spec.mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}")


def parse_scenario(path: str) -> ScenarioConfig:
    """Read and parse a scenario file."""
    with open(path, encoding="utf-8") as fh:
        return parse_scenario_text(fh.read())
