"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per
criterion in the terminal summary.
"""

import time

import numpy as np
import pytest

from edgeoffload import cli, experiments, model, spectrum
from edgeoffload.config import ScenarioConfig, emit, parse_scenario
from edgeoffload.model import Task
from edgeoffload.queue_sim import FleetScenario, fleet_sweep, generate_workload, simulate_fleet

import oracles

REL = 1e-9
MB = 1e6
EDGE, CLOUD = model.default_edge(), model.default_cloud()


def random_points(n=1000, seed=20181):
    rng = np.random.default_rng(seed)
    cycles = rng.uniform(*experiments.CYCLES_RANGE, n)
    data = rng.uniform(*experiments.DATA_RANGE_BITS, n)
    rates = rng.choice(model.RATES_BPS, n)
    return [(float(c), float(d), float(r)) for c, d, r in zip(cycles, data, rates)]


@pytest.mark.criterion(1, "point oracle: edge 102.2 ms, cloud 108.02 ms (rel 1e-9)")
def test_point_oracle():
    task, path = Task(1e6, 1e5), model.default_path(1e6)
    edge = model.edge_delay(task, EDGE, path).total_s
    cloud = model.cloud_delay(task, CLOUD, path).total_s
    assert edge == pytest.approx(102.2e-3, rel=REL)
    assert cloud == pytest.approx(108.02e-3, rel=REL)
    assert edge == pytest.approx(float(oracles.edge_total(1e6, 1e5, 1e6)), rel=REL)
    assert cloud == pytest.approx(float(oracles.cloud_total(1e6, 1e5, 1e6)), rel=REL)


@pytest.mark.criterion(2, "gap law: cloud - edge = 6 ms - C*1.8e-10 s on 1000 points (rel 1e-9)")
def test_gap_law():
    for c, d, r in random_points():
        path = model.default_path(r)
        gap = (model.cloud_delay(Task(c, d), CLOUD, path).total_s
               - model.edge_delay(Task(c, d), EDGE, path).total_s)
        assert gap == pytest.approx(6e-3 - c * 1.8e-10, rel=REL)


@pytest.mark.criterion(3, "crossover at 3.333e7 cycles (rel 1e-6) and ordering flips")
def test_crossover():
    path = model.default_path()
    c_star = model.crossover_cycles(EDGE, CLOUD, path)
    assert c_star == pytest.approx(1e8 / 3, rel=1e-6)
    for factor in (0.5, 0.9, 0.999):
        for d in (0, 1e3, 1e5):
            lo, hi = Task(c_star * factor, d), Task(c_star / factor, d)
            assert model.edge_delay(lo, EDGE, path).total_s < \
                model.cloud_delay(lo, CLOUD, path).total_s
            assert model.edge_delay(hi, EDGE, path).total_s > \
                model.cloud_delay(hi, CLOUD, path).total_s


@pytest.mark.criterion(4, "20% frontier at D ~ 2.2e4 bits / C ~ 2.2e5 (2%); "
                          "reduction > 0 and margin >= 5.82 ms on the whole grid")
def test_twenty_percent_frontier():
    rows = experiments.sweep_delay(experiments.reference_sweep(points=100, rates_bps=(1e6,)))
    summary = experiments.summarize(rows)
    assert summary.frontier_D_bits == pytest.approx(2.2e4, rel=0.02)
    assert summary.frontier_C_cycles == pytest.approx(2.2e5, rel=0.02)

    grid = experiments.SweepSpec(
        cycles=experiments.grid(*experiments.CYCLES_RANGE, 60),
        data_bits=experiments.grid(*experiments.DATA_RANGE_BITS, 60),
        rates_bps=model.RATES_BPS, pairing=experiments.CARTESIAN)
    cells = experiments.sweep_delay(grid)
    assert len(cells) == 60 * 60 * 3
    assert min(r.rel_reduction for r in cells) > 0
    assert min(r.gap_s for r in cells) == pytest.approx(5.82e-3, rel=REL)
    assert all(r.gap_s >= 5.82e-3 * (1 - REL) for r in cells)


@pytest.mark.criterion(5, "energy law: cloud - edge = 0.2*D on 1000 points (rel 1e-9); "
                          "energy increasing in D at caps 1e6/1e7/1e8")
def test_energy_law():
    path = model.default_path()
    for c, d, _ in random_points(seed=646):
        task = Task(c, d)
        diff = model.cloud_energy(task, CLOUD, EDGE, path) - model.edge_energy(task, EDGE)
        assert diff == pytest.approx(0.2 * d, rel=REL)
    rows = experiments.sweep_energy(experiments.reference_sweep(points=100),
                                    caps=(1e6, 1e7, 1e8))
    for cap in (1e6, 1e7, 1e8):
        per_cap = [r for r in rows if r.C_cycles == cap]
        assert len(per_cap) == 100
        for attr in ("edge_energy", "cloud_energy"):
            vals = [getattr(r, attr) for r in per_cap]
            assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.criterion(6, "fleet: hand traces 5.002/4.002 s, monotone in K, J=1 reduction, "
                          "uplink floor, small data gains less, grid < 5 s")
def test_fleet_properties():
    link, edge = model.default_path(), model.default_edge()
    base = FleetScenario(fleet_size=1, total_bits=2 * MB, task_count=2, link=link, edge=edge)
    assert simulate_fleet(base).makespan_s == pytest.approx(5.002, rel=REL)
    two = FleetScenario(fleet_size=2, total_bits=2 * MB, task_count=2, link=link, edge=edge)
    assert simulate_fleet(two).makespan_s == pytest.approx(4.002, rel=REL)

    template = experiments.default_fleet_template()
    totals = (1 * MB, 10 * MB, 100 * MB)
    started = time.perf_counter()
    cells = fleet_sweep(template, range(1, 9), totals, task_bits=MB)
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0

    by_total = {t: [c for c in cells if c.total_bits == t] for t in totals}
    for total, row in by_total.items():
        spans = [c.result.makespan_s for c in row]
        assert all(b <= a for a, b in zip(spans, spans[1:]))
        for c in row:
            per_task = total / c.task_count
            floor = c.task_count * (per_task / link.rate_bps) + link.t_radio_s
            assert c.result.makespan_s >= floor * (1 - REL)

    for k in (1, 4, 8):
        single = FleetScenario(fleet_size=k, total_bits=0.7 * MB, task_count=1,
                               link=link, edge=edge)
        task = generate_workload(single)[0]
        assert simulate_fleet(single).makespan_s == pytest.approx(
            model.edge_delay(task, edge, link).total_s, rel=REL)

    def gain(total):
        spans = [c.result.makespan_s for c in by_total[total]]
        return (spans[0] - spans[-1]) / spans[0]

    assert gain(1 * MB) < gain(100 * MB)


@pytest.mark.criterion(7, "spectrum registry: every published row; Japan 50 MHz, "
                          "South Korea 20 MHz, WRC-15 overlap set")
def test_spectrum_registry():
    reg = spectrum.load_registry()
    assert len(reg) == 17
    assert [(e.itu_region, e.area) for e in reg].count((2, "Americas")) == 11
    (jp,) = spectrum.allocations_for("Japan")
    assert jp.ranges_mhz == ((4940, 4990),) and jp.bandwidth_mhz == 50
    assert spectrum.total_bandwidth("Japan") == 50
    assert spectrum.total_bandwidth("South Korea") == 20
    wrc = spectrum.bands_overlapping(694, 894)
    assert [(e.area, e.printed_band) for e in wrc] == [
        ("Europe", "733/758-788 MHz"),
        ("Americas", "758-769/788-799 MHz"),
        ("Americas", "768-775/798-805"),
        ("Americas", "806-809/851-854 MHz"),
        ("Americas", "809-815/854-860 MHz"),
        ("South Korea", "718-728/773-783"),
    ]


@pytest.mark.criterion(8, "determinism: identical sweep-delay CSV bytes; config round-trip")
def test_determinism_and_round_trip(tmp_path):
    outputs = []
    for name in ("first.csv", "second.csv"):
        assert cli.main(["sweep-delay", "-o", str(tmp_path / name)]) == 0
        outputs.append((tmp_path / name).read_bytes())
    assert outputs[0] == outputs[1] and len(outputs[0]) > 0

    for cfg in (ScenarioConfig(),
                parse_scenario(overrides={"f_ec": "3.3 GHz", "t_edge_radio": "1.5 ms",
                                          "rates": "1 Mbps, 2.5 Mbps", "dispatch":
                                          "least-loaded", "users": "40",
                                          "scenario_id": "rt"})):
        path = tmp_path / f"{cfg.scenario_id}.cfg"
        path.write_text(emit(cfg))
        assert parse_scenario(path) == cfg
