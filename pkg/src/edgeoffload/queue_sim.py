"""Event-driven simulation of a UAV cloudlet fleet serving a task stream.

All tasks share one uplink, so transfers are serialized: task ``j`` (1-based)
finishes uploading at ``j * data_bits / rate_bps``. On arrival it is handed
to one of ``K`` UAVs, each a FIFO server with deterministic service time
``cycles / cpu_hz``.
"""

from __future__ import annotations

import collections
import heapq
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from .model import ComputePlatform, NetworkPath, Task, ValidationError

ROUND_ROBIN = "round-robin"
LEAST_LOADED = "least-loaded"
DISPATCH_POLICIES = (ROUND_ROBIN, LEAST_LOADED)

DEFAULT_CYCLES_PER_BIT = 1e4

# event kinds; departures sort before arrivals at equal timestamps
_DEPART, _ARRIVE = 0, 1


@dataclass(frozen=True)
class FleetScenario:
    fleet_size: int
    total_bits: float
    task_count: int
    link: NetworkPath
    edge: ComputePlatform
    cycles_per_bit: float = DEFAULT_CYCLES_PER_BIT
    dispatch: str = ROUND_ROBIN
    users: Optional[int] = None  # carried as metadata only

    def __post_init__(self):
        if not isinstance(self.fleet_size, int) or self.fleet_size < 1:
            raise ValidationError(f"fleet_size must be an integer >= 1, got {self.fleet_size!r}")
        if not isinstance(self.task_count, int) or self.task_count < 1:
            raise ValidationError(f"task_count must be an integer >= 1, got {self.task_count!r}")
        if not self.total_bits > 0 or self.total_bits == float("inf"):
            raise ValidationError(f"total_bits must be finite and > 0, got {self.total_bits!r}")
        if not self.cycles_per_bit > 0 or self.cycles_per_bit == float("inf"):
            raise ValidationError(
                f"cycles_per_bit must be finite and > 0, got {self.cycles_per_bit!r}")
        if self.dispatch not in DISPATCH_POLICIES:
            raise ValidationError(
                f"dispatch must be one of {DISPATCH_POLICIES}, got {self.dispatch!r}")
        if self.users is not None and (not isinstance(self.users, int) or self.users < 0):
            raise ValidationError(f"users must be a non-negative integer, got {self.users!r}")


@dataclass(frozen=True)
class TaskTrace:
    task_index: int  # 1-based position in the upload order
    arrival_s: float  # upload complete
    start_s: float
    finish_s: float
    uav_index: int  # 0-based
    data_bits: float
    service_s: float

    @property
    def wait_s(self) -> float:
        return self.start_s - self.arrival_s


@dataclass(frozen=True)
class FleetResult:
    makespan_s: float
    mean_delay_s: float
    max_queue_wait_s: float
    traces: Tuple[TaskTrace, ...]


def generate_workload(scenario: FleetScenario) -> List[Task]:
    """Split the scenario's total data into ``task_count`` equal tasks."""
    data_bits = scenario.total_bits / scenario.task_count
    if data_bits <= 0:
        raise ValidationError(
            f"total_bits={scenario.total_bits!r} split into {scenario.task_count} tasks "
            "leaves 0 bits per task")
    cycles = scenario.cycles_per_bit * data_bits
    return [Task(cycles=cycles, data_bits=data_bits) for _ in range(scenario.task_count)]


class _Dispatcher:
    def __init__(self, policy: str, fleet_size: int):
        self.policy = policy
        self.fleet_size = fleet_size
        self.busy_until = [0.0] * fleet_size  # time each UAV drains its queue
        self._next = 0

    def pick(self, now: float) -> int:
        if self.policy == ROUND_ROBIN:
            uav = self._next
            self._next = (self._next + 1) % self.fleet_size
            return uav
        # outstanding work at ``now``; min() keeps the lowest index on ties
        loads = [max(0.0, t - now) for t in self.busy_until]
        return min(range(self.fleet_size), key=loads.__getitem__)

    def commit(self, uav: int, now: float, service_s: float) -> None:
        self.busy_until[uav] = max(self.busy_until[uav], now) + service_s


def simulate_fleet(scenario: FleetScenario) -> FleetResult:
    tasks = generate_workload(scenario)
    transfer_s = tasks[0].data_bits / scenario.link.rate_bps
    service_s = tasks[0].cycles / scenario.edge.cpu_hz
    k = scenario.fleet_size

    dispatcher = _Dispatcher(scenario.dispatch, k)
    queues = [collections.deque() for _ in range(k)]
    busy = [False] * k
    arrivals = {}
    traces = {}

    events = []
    seq = 0
    for j in range(1, len(tasks) + 1):
        # j * transfer rather than a running sum keeps arrival times exact
        heapq.heappush(events, (j * transfer_s, _ARRIVE, seq, j))
        seq += 1

    def start(uav, j, now):
        nonlocal seq
        busy[uav] = True
        finish = now + service_s
        traces[j] = TaskTrace(j, arrivals[j], now, finish, uav, tasks[j - 1].data_bits,
                              service_s)
        heapq.heappush(events, (finish, _DEPART, seq, uav))
        seq += 1

    while events:
        now, kind, _, payload = heapq.heappop(events)
        if kind == _ARRIVE:
            j = payload
            arrivals[j] = now
            uav = dispatcher.pick(now)
            dispatcher.commit(uav, now, service_s)
            if busy[uav]:
                queues[uav].append(j)
            else:
                start(uav, j, now)
        else:
            uav = payload
            busy[uav] = False
            if queues[uav]:
                start(uav, queues[uav].popleft(), now)

    ordered = tuple(traces[j] for j in sorted(traces))
    radio_s = scenario.link.edge_path_s
    last = max(t.finish_s for t in ordered)
    mean_finish = sum(t.finish_s for t in ordered) / len(ordered)
    return FleetResult(
        makespan_s=last + radio_s,
        mean_delay_s=mean_finish + radio_s,
        max_queue_wait_s=max(t.wait_s for t in ordered),
        traces=ordered,
    )


@dataclass(frozen=True)
class FleetCell:
    fleet_size: int
    total_bits: float
    task_count: int
    result: FleetResult


def fleet_sweep(template: FleetScenario, fleet_sizes: Sequence[int],
                totals_bits: Sequence[float],
                task_bits: Optional[float] = None) -> List[FleetCell]:
    """Simulate every (fleet size, total data) pair, fleet size outermost.

    With ``task_bits`` set, each cell splits its total into tasks of that
    size (rounded to the nearest count, at least one); otherwise the
    template's ``task_count`` is used for every cell.
    """
    if not fleet_sizes or not totals_bits:
        raise ValidationError("fleet_sizes and totals_bits must be non-empty")
    if task_bits is not None and not task_bits > 0:
        raise ValidationError(f"task_bits must be > 0, got {task_bits!r}")
    cells = []
    for k in fleet_sizes:
        for total in totals_bits:
            count = template.task_count
            if task_bits is not None:
                count = max(1, round(total / task_bits))
            scenario = replace(template, fleet_size=k, total_bits=total, task_count=count)
            cells.append(FleetCell(k, total, count, simulate_fleet(scenario)))
    return cells
