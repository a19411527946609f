"""Scenario files: flat ``key = value [unit]`` text normalized to SI units.

Values may carry a unit suffix (``5 GHz``, ``2 ms``, ``100 kb``, ``1 Mbps``);
bare numbers are read in the canonical unit (Hz, s, bits, bit/s, cycles).
List keys take comma-separated items, each with its own optional unit.
Data sizes are bits; byte units are rejected rather than guessed.

Precedence, lowest first: built-in defaults, the config file, overrides.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple, Union

from . import experiments, model, queue_sim
from .model import ValidationError

SECTION = "scenario"


class ConfigError(ValidationError):
    """Base class for scenario parsing problems."""


class UnknownKeyError(ConfigError):
    pass


class UnitError(ConfigError):
    pass


class ConfigValueError(ConfigError):
    pass


class ConfigFileError(ConfigError):
    """The scenario file could not be read."""


_PREFIX = {"": 1.0, "k": 1e3, "K": 1e3, "M": 1e6, "G": 1e9}

UNITS: Dict[str, Dict[str, float]] = {
    "frequency": {p + "Hz": s for p, s in _PREFIX.items()},
    "rate": {**{p + "bps": s for p, s in _PREFIX.items()},
             **{p + "b/s": s for p, s in _PREFIX.items()},
             **{p + "bit/s": s for p, s in _PREFIX.items()}},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9},
    "data": {**{p + "b": s for p, s in _PREFIX.items()},
             **{p + "bit": s for p, s in _PREFIX.items()},
             **{p + "bits": s for p, s in _PREFIX.items()}},
    # cycle caps are quoted in MHz-style units in the study, so accept both spellings
    "cycles": {**{p + "cycles": s for p, s in _PREFIX.items()},
               **{p + "Hz": s for p, s in _PREFIX.items() if p}},
    "scalar": {},
}
CANONICAL_UNIT = {"frequency": "Hz", "rate": "bps", "time": "s", "data": "bits",
                  "cycles": "cycles", "scalar": ""}


@dataclass(frozen=True)
class _Key:
    kind: str  # a UNITS dimension, or "int", "str", "choice"
    minimum: str = "nonneg"  # "pos", "nonneg" or "" for non-numeric kinds
    is_list: bool = False
    optional: bool = False
    choices: Tuple[str, ...] = ()


KEYS: Dict[str, _Key] = {
    "scenario_id": _Key("str", ""),
    "output": _Key("str", "", optional=True),
    "f_cc": _Key("frequency", "pos"),
    "f_ec": _Key("frequency", "pos"),
    "r_eff": _Key("rate", "pos"),
    "rates": _Key("rate", "pos", is_list=True),
    "t_radio": _Key("time"),
    "t_backhaul": _Key("time"),
    "t_core": _Key("time"),
    "t_transport": _Key("time"),
    "t_edge_radio": _Key("time", optional=True),
    "e_cpu_ec": _Key("scalar"),
    "e_d_ec": _Key("scalar"),
    "e_cpu_c": _Key("scalar"),
    "e_d_c": _Key("scalar"),
    "e_d_bs": _Key("scalar"),
    "cycles": _Key("cycles"),
    "data": _Key("data"),
    "c_min": _Key("cycles", "pos"),
    "c_max": _Key("cycles", "pos"),
    "d_min": _Key("data", "pos"),
    "d_max": _Key("data", "pos"),
    "points": _Key("int", "pos"),
    "spacing": _Key("choice", "", choices=("log", "linear")),
    "pairing": _Key("choice", "", choices=(experiments.ZIPPED, experiments.CARTESIAN)),
    "energy_caps": _Key("cycles", "pos", is_list=True),
    "fleet_sizes": _Key("int", "pos", is_list=True),
    "fleet_totals": _Key("data", "pos", is_list=True),
    "task_bits": _Key("data", "pos"),
    "cycles_per_bit": _Key("scalar", "pos"),
    "dispatch": _Key("choice", "", choices=queue_sim.DISPATCH_POLICIES),
    "users": _Key("int", "nonneg", optional=True),
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Every tunable parameter, in canonical SI units."""

    scenario_id: str = "default"
    output: Optional[str] = None
    f_cc: float = model.CLOUD_CPU_HZ
    f_ec: float = model.EDGE_CPU_HZ
    r_eff: float = model.RATES_BPS[0]
    rates: Tuple[float, ...] = model.RATES_BPS
    t_radio: float = 2e-3
    t_backhaul: float = 2e-3
    t_core: float = 1e-3
    t_transport: float = 3e-3
    t_edge_radio: Optional[float] = None
    e_cpu_ec: float = 0.1
    e_d_ec: float = 0.1
    e_cpu_c: float = 0.1
    e_d_c: float = 0.1
    e_d_bs: float = 0.1
    cycles: float = 1e6
    data: float = 1e5
    c_min: float = experiments.CYCLES_RANGE[0]
    c_max: float = experiments.CYCLES_RANGE[1]
    d_min: float = experiments.DATA_RANGE_BITS[0]
    d_max: float = experiments.DATA_RANGE_BITS[1]
    points: int = 100
    spacing: str = "log"
    pairing: str = experiments.ZIPPED
    energy_caps: Tuple[float, ...] = experiments.ENERGY_CAPS
    fleet_sizes: Tuple[int, ...] = experiments.FLEET_SIZES
    fleet_totals: Tuple[float, ...] = experiments.FLEET_TOTALS_BITS
    task_bits: float = experiments.FLEET_TASK_BITS
    cycles_per_bit: float = queue_sim.DEFAULT_CYCLES_PER_BIT
    dispatch: str = queue_sim.ROUND_ROBIN
    users: Optional[int] = None

    def __post_init__(self):
        for name in KEYS:
            _validate(name, getattr(self, name))
        if self.c_min > self.c_max:
            raise ConfigValueError("c_min must not exceed c_max")
        if self.d_min > self.d_max:
            raise ConfigValueError("d_min must not exceed d_max")

    def edge(self) -> model.ComputePlatform:
        return model.ComputePlatform(self.f_ec, self.e_cpu_ec, self.e_d_ec)

    def cloud(self) -> model.ComputePlatform:
        return model.ComputePlatform(self.f_cc, self.e_cpu_c, self.e_d_c)

    def path(self, rate_bps: Optional[float] = None) -> model.NetworkPath:
        return model.NetworkPath(
            rate_bps=self.r_eff if rate_bps is None else rate_bps,
            t_radio_s=self.t_radio, t_backhaul_s=self.t_backhaul,
            t_core_s=self.t_core, t_transport_s=self.t_transport,
            bs_energy_per_bit=self.e_d_bs, t_edge_radio_s=self.t_edge_radio)

    def task(self) -> model.Task:
        return model.Task(self.cycles, self.data)

    def sweep_spec(self) -> experiments.SweepSpec:
        return experiments.SweepSpec(
            cycles=experiments.grid(self.c_min, self.c_max, self.points, self.spacing),
            data_bits=experiments.grid(self.d_min, self.d_max, self.points, self.spacing),
            rates_bps=self.rates, pairing=self.pairing,
            edge=self.edge(), cloud=self.cloud(), path=self.path(),
            scenario_id=self.scenario_id)

    def fleet_spec(self) -> experiments.FleetSweepSpec:
        template = queue_sim.FleetScenario(
            fleet_size=1, total_bits=self.fleet_totals[0], task_count=1,
            link=self.path(), edge=self.edge(), cycles_per_bit=self.cycles_per_bit,
            dispatch=self.dispatch, users=self.users)
        return experiments.FleetSweepSpec(
            template, self.fleet_sizes, self.fleet_totals, self.task_bits,
            scenario_id=self.scenario_id)


def _validate(name: str, value) -> None:
    key = KEYS[name]
    if value is None:
        if not key.optional:
            raise ConfigValueError(f"{name}: a value is required")
        return
    items = value if key.is_list else (value,)
    if key.is_list and not items:
        raise ConfigValueError(f"{name}: list must not be empty")
    for item in items:
        if key.kind == "str":
            if not isinstance(item, str) or (name == "scenario_id" and not item):
                raise ConfigValueError(f"{name}: expected a non-empty string")
            continue
        if key.kind == "choice":
            if item not in key.choices:
                raise ConfigValueError(f"{name}: {item!r} is not one of {key.choices}")
            continue
        if key.kind == "int" and (not isinstance(item, int) or isinstance(item, bool)):
            raise ConfigValueError(f"{name}: expected an integer, got {item!r}")
        if not math.isfinite(item):
            raise ConfigValueError(f"{name}: value must be finite, got {item!r}")
        if key.minimum == "pos" and item <= 0:
            raise ConfigValueError(f"{name}: value must be positive, got {item!r}")
        if key.minimum == "nonneg" and item < 0:
            raise ConfigValueError(f"{name}: value must be non-negative, got {item!r}")


_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?(?:inf|nan))"
                       r"\s*([A-Za-z/]*)\s*$")


def _parse_item(name: str, key: _Key, text: str):
    text = text.strip()
    if key.kind in ("str", "choice"):
        return text
    if key.kind == "int":
        try:
            return int(text)
        except ValueError:
            raise ConfigValueError(f"{name}: expected an integer, got {text!r}") from None
    m = _QUANTITY.match(text)
    if not m:
        raise ConfigValueError(f"{name}: cannot read a number from {text!r}")
    number, unit = float(m.group(1)), m.group(2)
    if unit and unit != CANONICAL_UNIT[key.kind]:
        scale = UNITS[key.kind].get(unit)
        if scale is None:
            allowed = ", ".join(UNITS[key.kind]) or "none"
            raise UnitError(f"{name}: bad unit suffix {unit!r} (allowed: {allowed})")
        return number * scale
    return number


def _parse_value(name: str, text: str):
    try:
        key = KEYS[name]
    except KeyError:
        raise UnknownKeyError(f"unknown key {name!r}") from None
    if key.optional and text.strip() == "":
        return None
    if key.is_list:
        return tuple(_parse_item(name, key, part) for part in text.split(",") if part.strip())
    return _parse_item(name, key, text)


def _read_file(path: Union[str, Path]) -> Dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigFileError(f"cannot read config file {str(path)!r}: {exc}") from exc
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str
    if not re.search(r"^\s*\[", text, re.MULTILINE):
        text = f"[{SECTION}]\n" + text
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigValueError(f"malformed config file {str(path)!r}: {exc}") from exc
    extra = [s for s in parser.sections() if s != SECTION]
    if extra:
        raise UnknownKeyError(f"unknown section {extra[0]!r} in {str(path)!r}")
    return dict(parser.items(SECTION)) if parser.has_section(SECTION) else {}


def parse_scenario(path: Union[str, Path, None] = None,
                   overrides: Optional[Mapping[str, str]] = None) -> ScenarioConfig:
    """Build a normalized config from an optional file plus string overrides."""
    raw: Dict[str, str] = {}
    if path is not None:
        raw.update(_read_file(path))
    if overrides:
        raw.update(overrides)
    values = {name.strip(): _parse_value(name.strip(), text) for name, text in raw.items()}
    try:
        return ScenarioConfig(**values)
    except ConfigError:
        raise
    except ValidationError as exc:
        raise ConfigValueError(str(exc)) from exc


def _emit_item(key: _Key, value) -> str:
    if key.kind in ("str", "choice", "int"):
        return str(value)
    unit = CANONICAL_UNIT[key.kind]
    return f"{value!r} {unit}".rstrip()


def emit(config: ScenarioConfig) -> str:
    """Render ``config`` in the file format; ``parse_scenario`` reads it back exactly."""
    lines = [f"[{SECTION}]"]
    for name, key in KEYS.items():
        value = getattr(config, name)
        if value is None:
            continue
        if key.is_list:
            text = ", ".join(_emit_item(key, v) for v in value)
        else:
            text = _emit_item(key, value)
        lines.append(f"{name} = {text}")
    return "\n".join(lines) + "\n"
