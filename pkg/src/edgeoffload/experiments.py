"""Parameter sweeps over the delay/energy model and the fleet simulator.

Every row is produced by calling the model or simulator at one grid point;
the sweeps do no arithmetic of their own beyond the edge/cloud gap and the
relative reduction.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO, Union

import numpy as np

from . import model, queue_sim
from .model import ComputePlatform, Crossover, NetworkPath, Task, ValidationError

ZIPPED = "zipped"
CARTESIAN = "cartesian"

CSV_COLUMNS = (
    "scenario_id", "C_cycles", "D_bits", "R_bps", "K", "total_bits",
    "edge_total_s", "cloud_total_s", "gap_s", "rel_reduction",
    "edge_energy", "cloud_energy", "makespan_s", "mean_delay_s", "max_wait_s",
)

SUMMARY_KEYS = ("mean_reduction", "min_reduction", "max_reduction",
                "frontier_D_bits", "crossover_cycles")

FRONTIER_LEVEL = 0.20

# grid endpoints of the numerical study
CYCLES_RANGE = (1e4, 1e6)
DATA_RANGE_BITS = (1e3, 1e5)
ENERGY_CAPS = (1e6, 1e7, 1e8)
FLEET_SIZES = tuple(range(1, 9))
FLEET_TOTALS_BITS = (1e6, 1e7, 1e8)
FLEET_TASK_BITS = 1e6


def grid(low: float, high: float, points: int, spacing: str = "log") -> List[float]:
    """``points`` values from ``low`` to ``high`` inclusive."""
    if points < 1:
        raise ValidationError(f"points must be >= 1, got {points}")
    if points == 1:
        return [float(low)]
    if spacing == "log":
        if low <= 0:
            raise ValidationError("log spacing needs a positive lower bound")
        values = np.geomspace(low, high, points)
    elif spacing == "linear":
        values = np.linspace(low, high, points)
    else:
        raise ValidationError(f"spacing must be 'log' or 'linear', got {spacing!r}")
    values[0], values[-1] = low, high
    return [float(v) for v in values]


@dataclass(frozen=True)
class SweepSpec:
    cycles: Sequence[float]
    data_bits: Sequence[float]
    rates_bps: Sequence[float] = (1e6,)
    pairing: str = ZIPPED
    edge: ComputePlatform = field(default_factory=model.default_edge)
    cloud: ComputePlatform = field(default_factory=model.default_cloud)
    path: NetworkPath = field(default_factory=model.default_path)  # rate_bps is overridden
    scenario_id: str = "default"
    output: Optional[Path] = None

    def __post_init__(self):
        if not self.cycles or not self.data_bits or not self.rates_bps:
            raise ValidationError("cycles, data_bits and rates_bps must be non-empty")
        if self.pairing not in (ZIPPED, CARTESIAN):
            raise ValidationError(f"pairing must be {ZIPPED!r} or {CARTESIAN!r}")
        if self.pairing == ZIPPED and len(self.cycles) != len(self.data_bits):
            raise ValidationError(
                f"zipped pairing needs equal lengths, got {len(self.cycles)} cycles "
                f"and {len(self.data_bits)} data sizes")

    def points(self):
        """Yield ``(cycles, data_bits, rate_bps)`` in grid order, rate outermost."""
        for rate in self.rates_bps:
            if self.pairing == ZIPPED:
                pairs = zip(self.cycles, self.data_bits)
            else:
                pairs = ((c, d) for c in self.cycles for d in self.data_bits)
            for c, d in pairs:
                yield c, d, rate


def reference_sweep(points: int = 100, spacing: str = "log",
                    rates_bps: Sequence[float] = (1e6,), **kwargs) -> SweepSpec:
    """Zipped sweep across the study's cycle and data ranges (aligned 10:1)."""
    return SweepSpec(cycles=grid(*CYCLES_RANGE, points, spacing),
                     data_bits=grid(*DATA_RANGE_BITS, points, spacing),
                     rates_bps=tuple(rates_bps), **kwargs)


@dataclass(frozen=True)
class SweepRow:
    scenario_id: str
    C_cycles: Optional[float] = None
    D_bits: Optional[float] = None
    R_bps: Optional[float] = None
    K: Optional[int] = None
    total_bits: Optional[float] = None
    edge_total_s: Optional[float] = None
    cloud_total_s: Optional[float] = None
    gap_s: Optional[float] = None
    rel_reduction: Optional[float] = None
    edge_energy: Optional[float] = None
    cloud_energy: Optional[float] = None
    makespan_s: Optional[float] = None
    mean_delay_s: Optional[float] = None
    max_wait_s: Optional[float] = None


def delay_row(scenario_id: str, cycles: float, data_bits: float, rate_bps: float,
              edge: ComputePlatform, cloud: ComputePlatform,
              path: NetworkPath) -> SweepRow:
    task = Task(cycles, data_bits)
    path = dataclasses.replace(path, rate_bps=rate_bps)
    e = model.edge_delay(task, edge, path)
    c = model.cloud_delay(task, cloud, path, edge=edge)
    return SweepRow(
        scenario_id, cycles, data_bits, rate_bps,
        edge_total_s=e.total_s, cloud_total_s=c.total_s,
        gap_s=c.total_s - e.total_s, rel_reduction=model.relative_reduction(e, c),
        edge_energy=e.energy_units, cloud_energy=c.energy_units,
    )


def sweep_delay(spec: SweepSpec) -> List[SweepRow]:
    return [delay_row(spec.scenario_id, c, d, r, spec.edge, spec.cloud, spec.path)
            for c, d, r in spec.points()]


def sweep_energy(spec: SweepSpec, caps: Sequence[float] = ENERGY_CAPS) -> List[SweepRow]:
    """Energy of both paths at ``C = cap`` for each cap and each data size."""
    if not caps:
        raise ValidationError("caps must be non-empty")
    for cap in caps:
        if not cap > 0:
            raise ValidationError(f"cycle caps must be > 0, got {cap!r}")
    rows = []
    for cap in caps:
        for d in spec.data_bits:
            task = Task(cap, d)
            rows.append(SweepRow(
                spec.scenario_id, C_cycles=cap, D_bits=d,
                edge_energy=model.edge_energy(task, spec.edge),
                cloud_energy=model.cloud_energy(task, spec.cloud, spec.edge, spec.path),
            ))
    return rows


@dataclass(frozen=True)
class FleetSweepSpec:
    template: queue_sim.FleetScenario
    fleet_sizes: Sequence[int] = FLEET_SIZES
    totals_bits: Sequence[float] = FLEET_TOTALS_BITS
    task_bits: Optional[float] = FLEET_TASK_BITS
    scenario_id: str = "default"


def default_fleet_template(**overrides) -> queue_sim.FleetScenario:
    params = dict(fleet_size=1, total_bits=FLEET_TOTALS_BITS[0], task_count=1,
                  link=model.default_path(), edge=model.default_edge())
    params.update(overrides)
    return queue_sim.FleetScenario(**params)


def sweep_fleet(spec: FleetSweepSpec) -> List[SweepRow]:
    cells = queue_sim.fleet_sweep(spec.template, spec.fleet_sizes, spec.totals_bits,
                                  task_bits=spec.task_bits)
    return [SweepRow(spec.scenario_id, K=cell.fleet_size, total_bits=cell.total_bits,
                     makespan_s=cell.result.makespan_s,
                     mean_delay_s=cell.result.mean_delay_s,
                     max_wait_s=cell.result.max_queue_wait_s)
            for cell in cells]


@dataclass(frozen=True)
class Summary:
    mean_reduction: float
    min_reduction: float
    max_reduction: float
    frontier_D_bits: Optional[float]
    frontier_C_cycles: Optional[float]
    crossover_cycles: Union[float, Crossover, None]

    def to_json(self) -> str:
        record = {key: getattr(self, key) for key in SUMMARY_KEYS}
        if isinstance(self.crossover_cycles, Crossover):
            record["crossover_cycles"] = self.crossover_cycles.value
        return json.dumps(record, indent=2) + "\n"


def _interpolate(x0, x1, y0, y1, level):
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def frontier(rows: Sequence[SweepRow], level: float = FRONTIER_LEVEL):
    """First ``(D_bits, C_cycles)`` where the reduction crosses ``level``.

    Only consecutive rows at the same rate are bracketed; inputs are linearly
    interpolated between them. Returns ``(None, None)`` when nothing crosses.
    """
    for a, b in zip(rows, rows[1:]):
        if a.R_bps != b.R_bps:
            continue
        ya, yb = a.rel_reduction, b.rel_reduction
        if ya == level:
            return a.D_bits, a.C_cycles
        if (ya - level) * (yb - level) < 0:
            return (_interpolate(a.D_bits, b.D_bits, ya, yb, level),
                    _interpolate(a.C_cycles, b.C_cycles, ya, yb, level))
    if rows and rows[-1].rel_reduction == level:
        return rows[-1].D_bits, rows[-1].C_cycles
    return None, None


def summarize(rows: Sequence[SweepRow],
              crossover: Union[float, Crossover, None] = None) -> Summary:
    rows = [r for r in rows if r.rel_reduction is not None]
    if not rows:
        raise ValidationError("summarize needs at least one row with a delay reduction")
    reductions = [r.rel_reduction for r in rows]
    d_front, c_front = frontier(rows)
    return Summary(
        mean_reduction=math.fsum(reductions) / len(reductions),
        min_reduction=min(reductions),
        max_reduction=max(reductions),
        frontier_D_bits=d_front,
        frontier_C_cycles=c_front,
        crossover_cycles=crossover,
    )


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(rows: Iterable[SweepRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell(getattr(row, col)) for col in CSV_COLUMNS])


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    write_rows(rows, buf)
    return buf.getvalue()


def write_atomic(path: Union[str, os.PathLike], text: str) -> None:
    """Write ``text`` to ``path`` via a sibling temp file and rename.

    A failure at any point leaves no partial file behind.
    """
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp",
                               dir=path.parent if str(path.parent) else ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
