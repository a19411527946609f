import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeoffload import model
from edgeoffload.model import Task, ValidationError
from edgeoffload.queue_sim import (LEAST_LOADED, ROUND_ROBIN, FleetScenario, fleet_sweep,
                                   generate_workload, simulate_fleet)

import oracles

REL = 1e-9
MB = 1e6


def scenario(**kw):
    params = dict(fleet_size=1, total_bits=2 * MB, task_count=2, cycles_per_bit=1e4,
                  link=model.default_path(), edge=model.default_edge())
    params.update(kw)
    return FleetScenario(**params)


@pytest.mark.parametrize("total, count, kappa, bits, cycles", [
    (100 * MB, 100, 1e4, 1e6, 1e10),
    (1 * MB, 1, 1, 1e6, 1e6),
    (10 * MB, 10, 1e4, 1e6, 1e10),
])
def test_generate_workload(total, count, kappa, bits, cycles):
    tasks = generate_workload(scenario(total_bits=total, task_count=count, cycles_per_bit=kappa))
    assert tasks == [Task(cycles, bits)] * count


def test_workload_underflow_rejected():
    with pytest.raises(ValidationError, match="0 bits"):
        generate_workload(scenario(total_bits=5e-324, task_count=2))


def test_hand_trace_single_uav():
    res = simulate_fleet(scenario(fleet_size=1))
    got = [(t.arrival_s, t.start_s, t.finish_s, t.uav_index) for t in res.traces]
    assert got == [(1.0, 1.0, 3.0, 0), (2.0, 3.0, 5.0, 0)]
    assert res.makespan_s == pytest.approx(5.002, rel=REL)
    assert res.max_queue_wait_s == pytest.approx(1.0)
    assert res.mean_delay_s == pytest.approx(4.002, rel=REL)


def test_hand_trace_two_uavs():
    res = simulate_fleet(scenario(fleet_size=2))
    second = res.traces[1]
    assert (second.start_s, second.finish_s, second.uav_index) == (2.0, 4.0, 1)
    assert res.makespan_s == pytest.approx(4.002, rel=REL)
    assert res.max_queue_wait_s == 0.0


@pytest.mark.parametrize("k", [1, 3, 8])
@pytest.mark.parametrize("policy", [ROUND_ROBIN, LEAST_LOADED])
def test_single_task_reduces_to_edge_delay(k, policy):
    sc = scenario(fleet_size=k, total_bits=0.37 * MB, task_count=1, dispatch=policy)
    task = generate_workload(sc)[0]
    expected = model.edge_delay(task, sc.edge, sc.link).total_s
    assert simulate_fleet(sc).makespan_s == pytest.approx(expected, rel=REL)


fleet_st = st.integers(min_value=1, max_value=10)
count_st = st.integers(min_value=1, max_value=40)
total_st = st.floats(min_value=1e3, max_value=1e8)
kappa_st = st.floats(min_value=1.0, max_value=5e4)
policy_st = st.sampled_from([ROUND_ROBIN, LEAST_LOADED])


@settings(max_examples=150, deadline=None)
@given(fleet_st, count_st, total_st, kappa_st, policy_st)
def test_matches_recurrence_oracle(k, n, total, kappa, policy):
    sc = scenario(fleet_size=k, task_count=n, total_bits=total, cycles_per_bit=kappa,
                  dispatch=policy)
    res = simulate_fleet(sc)
    task = generate_workload(sc)[0]
    expected = oracles.fleet_schedule(n, k, task.data_bits / sc.link.rate_bps,
                                      task.cycles / sc.edge.cpu_hz, policy)
    for trace, (arrival, start, finish, uav) in zip(res.traces, expected):
        assert trace.arrival_s == pytest.approx(arrival, rel=REL)
        assert trace.start_s == pytest.approx(start, rel=REL)
        assert trace.finish_s == pytest.approx(finish, rel=REL)
        assert trace.uav_index == uav


@settings(max_examples=150, deadline=None)
@given(fleet_st, count_st, total_st, kappa_st, policy_st)
def test_trace_invariants(k, n, total, kappa, policy):
    sc = scenario(fleet_size=k, task_count=n, total_bits=total, cycles_per_bit=kappa,
                  dispatch=policy)
    res = simulate_fleet(sc)
    assert [t.task_index for t in res.traces] == list(range(1, n + 1))
    assert sum(t.data_bits for t in res.traces) == pytest.approx(total, rel=REL)
    for t in res.traces:
        assert t.arrival_s <= t.start_s <= t.finish_s
        assert t.finish_s - t.start_s == pytest.approx(t.service_s, rel=REL)
        assert 0 <= t.uav_index < k
    radio = sc.link.t_radio_s
    assert res.makespan_s == max(t.finish_s for t in res.traces) + radio
    assert res.makespan_s >= res.mean_delay_s >= 0
    floor = n * (total / n / sc.link.rate_bps) + radio
    assert res.makespan_s >= floor * (1 - REL)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=1, max_value=9), count_st, total_st, kappa_st, policy_st)
def test_makespan_non_increasing_in_fleet_size(k, n, total, kappa, policy):
    small = simulate_fleet(scenario(fleet_size=k, task_count=n, total_bits=total,
                                    cycles_per_bit=kappa, dispatch=policy))
    big = simulate_fleet(scenario(fleet_size=k + 1, task_count=n, total_bits=total,
                                  cycles_per_bit=kappa, dispatch=policy))
    assert big.makespan_s <= small.makespan_s * (1 + REL)


@settings(max_examples=50, deadline=None)
@given(count_st, total_st, kappa_st, policy_st)
def test_saturated_fleet_has_no_queue(n, total, kappa, policy):
    sc = scenario(fleet_size=n + 2, task_count=n, total_bits=total, cycles_per_bit=kappa,
                  dispatch=policy)
    res = simulate_fleet(sc)
    task = generate_workload(sc)[0]
    assert all(t.start_s == t.arrival_s for t in res.traces)
    expected = n * (task.data_bits / sc.link.rate_bps) + task.cycles / sc.edge.cpu_hz + 2e-3
    assert res.makespan_s == pytest.approx(expected, rel=REL)


def test_least_loaded_prefers_lowest_index_on_ties():
    res = simulate_fleet(scenario(fleet_size=4, task_count=3, total_bits=3 * MB,
                                  cycles_per_bit=100, dispatch=LEAST_LOADED))
    assert [t.uav_index for t in res.traces] == [0, 0, 0]


def test_least_loaded_avoids_busy_uav():
    res = simulate_fleet(scenario(fleet_size=2, task_count=3, total_bits=3 * MB,
                                  cycles_per_bit=3e4, dispatch=LEAST_LOADED))
    # service 6 s per task, arrivals every 1 s
    assert [t.uav_index for t in res.traces] == [0, 1, 0]


def test_simulation_is_deterministic():
    sc = scenario(fleet_size=3, task_count=25, total_bits=25 * MB, dispatch=LEAST_LOADED)
    assert simulate_fleet(sc) == simulate_fleet(sc)


@pytest.mark.parametrize("kw", [
    dict(fleet_size=0),
    dict(task_count=0),
    dict(total_bits=0),
    dict(total_bits=float("nan")),
    dict(cycles_per_bit=0),
    dict(dispatch="random"),
    dict(fleet_size=2.0),
    dict(users=-1),
])
def test_invalid_scenarios(kw):
    with pytest.raises(ValidationError):
        scenario(**kw)


def test_users_are_metadata_only():
    assert simulate_fleet(scenario(users=50)) == simulate_fleet(scenario())


def test_fleet_sweep_order_and_monotone_rows():
    totals = [1 * MB, 10 * MB, 100 * MB]
    cells = fleet_sweep(scenario(), range(1, 9), totals, task_bits=MB)
    assert [(c.fleet_size, c.total_bits) for c in cells] == \
        [(k, t) for k in range(1, 9) for t in totals]
    for t in totals:
        row = [c.result.makespan_s for c in cells if c.total_bits == t]
        assert all(b <= a for a, b in zip(row, row[1:]))


def test_fleet_sweep_light_load_forms_no_queue():
    cells = fleet_sweep(scenario(task_count=10, cycles_per_bit=1e3), range(1, 9), [1 * MB])
    assert len({c.result.makespan_s for c in cells}) == 1
    for c in cells:
        assert all(t.start_s == t.arrival_s for t in c.result.traces)


def test_fleet_sweep_singleton_equals_simulation():
    sc = scenario(task_count=1, total_bits=MB)
    (cell,) = fleet_sweep(sc, [1], [MB])
    assert cell.result == simulate_fleet(sc)


def test_fleet_sweep_rejects_empty_lists():
    with pytest.raises(ValidationError):
        fleet_sweep(scenario(), [], [MB])
    with pytest.raises(ValidationError):
        fleet_sweep(scenario(), [1], [])
