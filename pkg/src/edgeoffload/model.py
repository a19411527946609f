"""Closed-form delay and energy of a single offloaded task.

Two execution sites are compared. The UAV cloudlet (edge) path pays only
the radio access delay on top of compute and transmit time; the central
cloud path additionally crosses backhaul, core and transport networks but
runs on a faster CPU.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union


class ValidationError(ValueError):
    """Raised when an input violates a documented invariant."""


def _check(name: str, value: float, *, positive: bool = False) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    if positive and value <= 0:
        raise ValidationError(f"{name} must be > 0, got {value!r}")
    if value < 0:
        raise ValidationError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class Task:
    """One offloadable job."""

    cycles: float  # CPU cycles needed
    data_bits: float  # payload forwarded to the processing site

    def __post_init__(self):
        _check("cycles", self.cycles)
        _check("data_bits", self.data_bits)


@dataclass(frozen=True)
class ComputePlatform:
    """A processing site: CPU speed plus abstract energy rates."""

    cpu_hz: float
    energy_per_cycle: float = 0.1
    energy_per_bit: float = 0.1

    def __post_init__(self):
        _check("cpu_hz", self.cpu_hz, positive=True)
        _check("energy_per_cycle", self.energy_per_cycle)
        _check("energy_per_bit", self.energy_per_bit)


@dataclass(frozen=True)
class NetworkPath:
    """Effective link rate and the fixed delay of every network segment.

    ``t_edge_radio_s`` overrides the radio delay seen on the edge path; when
    left as None the edge path uses ``t_radio_s``.
    """

    rate_bps: float = 1e6
    t_radio_s: float = 2e-3
    t_backhaul_s: float = 2e-3
    t_core_s: float = 1e-3
    t_transport_s: float = 3e-3
    bs_energy_per_bit: float = 0.1
    t_edge_radio_s: Optional[float] = None

    def __post_init__(self):
        _check("rate_bps", self.rate_bps, positive=True)
        for name in ("t_radio_s", "t_backhaul_s", "t_core_s", "t_transport_s",
                     "bs_energy_per_bit"):
            _check(name, getattr(self, name))
        if self.t_edge_radio_s is not None:
            _check("t_edge_radio_s", self.t_edge_radio_s)

    @property
    def edge_path_s(self) -> float:
        if self.t_edge_radio_s is None:
            return self.t_radio_s
        return self.t_edge_radio_s

    @property
    def cloud_path_s(self) -> float:
        return self.t_radio_s + self.t_backhaul_s + self.t_core_s + self.t_transport_s

    @property
    def path_surplus_s(self) -> float:
        """Extra fixed delay the cloud path pays over the edge path."""
        return self.cloud_path_s - self.edge_path_s


@dataclass(frozen=True)
class CostBreakdown:
    """Delay components of one task on one path.

    ``total_s`` is always ``compute_s + transmit_s + path_s`` evaluated in
    that order. ``energy_units`` is None when the caller did not supply the
    platforms needed to price the path.
    """

    compute_s: float
    transmit_s: float
    path_s: float
    total_s: float
    energy_units: Optional[float] = None

    @classmethod
    def from_parts(cls, compute_s, transmit_s, path_s, energy_units=None):
        return cls(compute_s, transmit_s, path_s,
                   compute_s + transmit_s + path_s, energy_units)


class Crossover(enum.Enum):
    """Outcome of :func:`crossover_cycles` when no finite crossover exists."""

    EDGE_ALWAYS_WINS = "edge-always-wins"
    CLOUD_ALWAYS_WINS = "cloud-always-wins"
    ALWAYS_TIE = "always-tie"


def edge_energy(task: Task, edge: ComputePlatform) -> float:
    return task.cycles * edge.energy_per_cycle + task.data_bits * edge.energy_per_bit


def cloud_energy(task: Task, cloud: ComputePlatform, edge: ComputePlatform,
                 path: NetworkPath) -> float:
    """Energy of the cloud path, term for term as published.

    The payload is charged at the edge relay rate, the base station rate and
    the cloud rate, plus the cloud's per-cycle cost.
    """
    return (task.data_bits * edge.energy_per_bit
            + task.data_bits * path.bs_energy_per_bit
            + task.cycles * cloud.energy_per_cycle
            + task.data_bits * cloud.energy_per_bit)


def edge_delay(task: Task, edge: ComputePlatform, path: NetworkPath) -> CostBreakdown:
    return CostBreakdown.from_parts(
        task.cycles / edge.cpu_hz,
        task.data_bits / path.rate_bps,
        path.edge_path_s,
        edge_energy(task, edge),
    )


def cloud_delay(task: Task, cloud: ComputePlatform, path: NetworkPath,
                edge: Optional[ComputePlatform] = None) -> CostBreakdown:
    """Delay of running ``task`` in the central cloud.

    Pass ``edge`` to also price the energy, which includes the edge relay
    term; otherwise ``energy_units`` is left as None.
    """
    energy = None if edge is None else cloud_energy(task, cloud, edge, path)
    return CostBreakdown.from_parts(
        task.cycles / cloud.cpu_hz,
        task.data_bits / path.rate_bps,
        path.cloud_path_s,
        energy,
    )


def crossover_cycles(edge: ComputePlatform, cloud: ComputePlatform,
                     path: NetworkPath) -> Union[float, Crossover]:
    """Cycle count at which the edge and cloud delays are equal.

    The transmit term and the shared radio delay cancel, so the edge wins
    exactly when ``C * (1/F_edge - 1/F_cloud) < path_surplus``. With a slower
    edge CPU and a positive surplus the edge wins for ``C < C*``.

    Only reachable through ``t_edge_radio_s`` overrides: if the edge CPU is
    faster but its path is longer, a finite ``C*`` is returned and the edge
    wins for ``C > C*`` instead.
    """
    slowdown = 1.0 / edge.cpu_hz - 1.0 / cloud.cpu_hz
    surplus = path.path_surplus_s
    if slowdown > 0:
        if surplus > 0:
            return surplus / slowdown
        return Crossover.CLOUD_ALWAYS_WINS
    if slowdown == 0:
        if surplus > 0:
            return Crossover.EDGE_ALWAYS_WINS
        if surplus == 0:
            return Crossover.ALWAYS_TIE
        return Crossover.CLOUD_ALWAYS_WINS
    if surplus >= 0:
        return Crossover.EDGE_ALWAYS_WINS
    return surplus / slowdown


def relative_reduction(edge: CostBreakdown, cloud: CostBreakdown) -> float:
    """Fraction of the cloud delay saved by running at the edge."""
    return (cloud.total_s - edge.total_s) / cloud.total_s


# Reference parameter set used throughout the numerical study.
EDGE_CPU_HZ = 5e9
CLOUD_CPU_HZ = 50e9
RATES_BPS = (1e6, 2e6, 3e6)


def default_edge() -> ComputePlatform:
    return ComputePlatform(cpu_hz=EDGE_CPU_HZ, energy_per_cycle=0.1, energy_per_bit=0.1)


def default_cloud() -> ComputePlatform:
    return ComputePlatform(cpu_hz=CLOUD_CPU_HZ, energy_per_cycle=0.1, energy_per_bit=0.1)


def default_path(rate_bps: float = RATES_BPS[0]) -> NetworkPath:
    return NetworkPath(rate_bps=rate_bps)
