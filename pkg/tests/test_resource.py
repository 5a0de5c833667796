import datetime

import numpy as np
import pytest

from gridmarket_lib.application import Gridlet, GridletStatus
from gridmarket_lib.errors import InvalidLoad, InvalidResource, NoFreePE, NoWork
from gridmarket_lib.kernel import Engine
from gridmarket_lib.net import Tags
from gridmarket_lib.resource import (AllocationPolicy, GridResource, Machine, PEStatus,
                                     ResidentGridlet, ResourceCalendar, ResourceCharacteristics,
                                     ResourceDynamics, effective_mips, forecast_next_completion,
                                     pe_share_allocation)
from tests.helpers import ScriptedNet, direct_run, single_machine


# ---------- SHARE ALGEBRA ----------

@pytest.mark.parametrize("duration, n_gridlets, n_pes, mips, expected", [
    (4.0, 2, 2, 1.0, (4.0, 4.0, 2)),
    (4.0, 3, 2, 1.0, (4.0, 2.0, 1)),
    (3.0, 3, 2, 1.0, (3.0, 1.5, 1)),
    (1.0, 5, 2, 10.0, (5.0, 10.0 / 3, 2)),
])
def test_pe_share_allocation(duration, n_gridlets, n_pes, mips, expected):
    table = pe_share_allocation(duration, n_gridlets, n_pes, mips)
    assert (table.max_share_mi, table.min_share_mi, table.n_max_share_gridlets) == \
        pytest.approx(expected)


def test_share_allocation_needs_pes_and_work():
    with pytest.raises(InvalidResource):
        pe_share_allocation(1.0, 1, 0, 1.0)
    with pytest.raises(NoWork):
        pe_share_allocation(1.0, 0, 2, 1.0)


def _resident(remaining, seq):
    rg = ResidentGridlet.admit(Gridlet(seq, 100.0), 0.0, seq)
    rg.remaining_mi = remaining
    return rg


@pytest.mark.parametrize("remaining, n_pes, clock, expected", [
    ([4.0, 5.5], 2, 10.0, 14.0),
    ([9.0], 1, 0.0, 9.0),
    ([3.0, 3.0, 3.0], 2, 0.0, 3.0),
])
def test_forecast_next_completion(remaining, n_pes, clock, expected):
    exec_set = [_resident(r, i) for i, r in enumerate(remaining)]
    assert forecast_next_completion(exec_set, n_pes, 1.0, clock) == pytest.approx(expected)


def test_forecast_of_empty_set():
    with pytest.raises(NoWork):
        forecast_next_completion([], 2, 1.0)


# ---------- TWO-PE GOLDEN TRACE ----------

def test_time_shared_trace(golden_time_shared):
    _, resource, gridlets = golden_time_shared
    assert [gl.finish_time for gl in gridlets] == pytest.approx([10.0, 14.0, 18.0], abs=1e-9)
    assert [gl.elapsed for gl in gridlets] == pytest.approx([10.0, 10.0, 11.0], abs=1e-9)
    assert [gl.exec_start_time for gl in gridlets] == [0.0, 4.0, 7.0]
    assert resource.submitted == resource.returned == 3


def test_space_shared_trace(golden_space_shared):
    _, resource, gridlets = golden_space_shared
    assert [gl.finish_time for gl in gridlets] == pytest.approx([10.0, 12.5, 19.5], abs=1e-9)
    assert [gl.elapsed for gl in gridlets] == pytest.approx([10.0, 8.5, 12.5], abs=1e-9)
    assert [gl.exec_start_time for gl in gridlets] == [0.0, 4.0, 10.0]
    assert resource.submitted == resource.returned == 3


@pytest.mark.parametrize("policy", ["time_shared", "space_shared"])
def test_credited_work_matches_length(policy):
    _, resource, _ = direct_run(policy)
    for rg in resource.finished:
        assert rg.credited_mi == pytest.approx(rg.gridlet.length_mi, rel=1e-6)
        assert rg.remaining_mi == 0.0


def test_stale_forecasts_are_discarded(golden_time_shared):
    _, resource, _ = golden_time_shared
    # one forecast per submission and per completion
    assert resource.forecast.event_tag_counter == 6
    assert resource.forecast.forecast_time is None


def test_single_gridlet_runs_at_full_rate():
    _, _, (gl,) = direct_run("time_shared", lengths=[10000.0], arrivals=[0.0], n_pes=1, mips=100.0)
    assert gl.finish_time == pytest.approx(100.0)
    assert gl.cpu_time == pytest.approx(100.0)


def test_space_shared_queues_fcfs():
    _, _, (first, second) = direct_run("space_shared", lengths=[5.0, 5.0], arrivals=[0.0, 0.0],
                                       n_pes=1)
    assert (first.finish_time, second.finish_time) == (5.0, 10.0)
    assert second.exec_start_time == 5.0


def test_space_shared_starts_everything_with_spare_pes():
    _, resource, gridlets = direct_run("space_shared", lengths=[50.0] * 10, arrivals=[0.0] * 10,
                                       n_pes=16)
    assert all(gl.exec_start_time == 0.0 for gl in gridlets)
    assert all(gl.finish_time == pytest.approx(50.0) for gl in gridlets)


def test_space_shared_never_exceeds_pe_count():
    _, _, gridlets = direct_run("space_shared", lengths=[4.0] * 7, arrivals=[0.0] * 7, n_pes=3)
    starts = sorted(gl.exec_start_time for gl in gridlets)
    assert starts == [0.0, 0.0, 0.0, 4.0, 4.0, 4.0, 8.0]
    # FCFS: start order follows submission order
    assert [gl.exec_start_time for gl in gridlets] == starts


def _busy_intervals(gridlets):
    """(dt, n_running) between consecutive arrival, start and finish instants."""
    points = sorted({t for gl in gridlets
                     for t in (gl.arrival_time, gl.exec_start_time, gl.finish_time)})
    for t0, t1 in zip(points, points[1:]):
        running = sum(1 for gl in gridlets if gl.exec_start_time <= t0 and gl.finish_time >= t1)
        yield t1 - t0, running


@pytest.mark.parametrize("policy", ["time_shared", "space_shared"])
@pytest.mark.parametrize("seed", range(10))
def test_credited_work_never_exceeds_capacity(policy, seed):
    rng = np.random.default_rng(seed)
    n, n_pes, mips = int(rng.integers(2, 9)), int(rng.integers(1, 4)), 10.0
    lengths = rng.uniform(10.0, 100.0, size=n).round(3).tolist()
    arrivals = np.sort(rng.uniform(0.0, 5.0, size=n)).round(3).tolist()
    _, _, gridlets = direct_run(policy, lengths=lengths, arrivals=arrivals, n_pes=n_pes, mips=mips)

    capacity = 0.0
    for dt, running in _busy_intervals(gridlets):
        if policy == "space_shared":
            assert running <= n_pes
        # time-shared keeps every PE busy once n >= n_pes
        capacity += min(running, n_pes) * mips * dt
    assert sum(lengths) == pytest.approx(capacity, rel=1e-6)
    for gl in gridlets:
        assert gl.length_mi <= mips * (gl.finish_time - gl.exec_start_time) + 1e-6


# ---------- PE ALLOCATION ----------

def _space_shared_resource(machines):
    chars = ResourceCharacteristics("arch", "os", machines, AllocationPolicy.SPACE_SHARED)
    resource = GridResource("R", chars)
    Engine().register(resource)
    return resource


def test_allocation_takes_lowest_free_pe():
    machines = [Machine.homogeneous(0, 2, 1.0), Machine.homogeneous(1, 2, 1.0)]
    machines[0].pes[0].status = PEStatus.BUSY
    resource = _space_shared_resource(machines)
    rg = ResidentGridlet.admit(Gridlet(0, 9.5, owner=0), 0.0, 0)

    resource.allocate_pe_to_gridlet(rg)

    assert (rg.machine_id, rg.pe_id) == (0, 1)
    assert machines[0].pes[1].status is PEStatus.BUSY
    assert resource.forecast.forecast_time == pytest.approx(9.5)


def test_allocation_without_free_pe():
    machines = [Machine.homogeneous(0, 1, 1.0)]
    machines[0].pes[0].status = PEStatus.BUSY
    resource = _space_shared_resource(machines)
    with pytest.raises(NoFreePE):
        resource.allocate_pe_to_gridlet(ResidentGridlet.admit(Gridlet(0, 1.0, owner=0), 0.0, 0))


def test_resource_validation():
    with pytest.raises(InvalidResource):
        ResourceCharacteristics("a", "o", [Machine.homogeneous(0, 1, 1.0),
                                           Machine.homogeneous(1, 1, 1.0)], "time_shared")
    with pytest.raises(InvalidResource):
        Machine.homogeneous(0, 1, 0.0)
    with pytest.raises(InvalidResource):
        single_machine(1, 1.0, price=-1.0)


def test_cost_figures():
    chars = single_machine(4, 515.0, price=8.0)
    assert chars.mips_per_g == pytest.approx(64.375)
    assert chars.total_mips == 2060.0
    assert chars.n_pes == 4


# ---------- CALENDAR ----------

def test_effective_mips_without_load():
    assert effective_mips(400.0, ResourceCalendar(), 0.0) == 400.0
    assert effective_mips(400.0, None, 0.0) == 400.0


def test_effective_mips_under_load():
    calendar = ResourceCalendar(peak_load=0.5, off_peak_load=0.5, holiday_load=0.5)
    assert effective_mips(400.0, calendar, 12345.0) == 200.0


def test_full_load_is_rejected():
    with pytest.raises(InvalidLoad):
        ResourceCalendar(peak_load=1.0)


HOUR = 3600.0
DAY = 24 * HOUR


@pytest.mark.parametrize("now, expected", [
    (8 * HOUR, 0.1),                 # Monday before the peak window
    (10 * HOUR, 0.6),                # Monday peak
    (17 * HOUR, 0.1),                # window end is exclusive
    (5 * DAY + 10 * HOUR, 0.3),      # Saturday
    (1 * DAY + 10 * HOUR, 0.3),      # Tuesday, declared holiday
])
def test_calendar_load(now, expected):
    calendar = ResourceCalendar(peak_load=0.6, off_peak_load=0.1, holiday_load=0.3,
                                holidays={datetime.date(2002, 1, 8)})
    assert calendar.load(now) == expected


def test_calendar_uses_local_time():
    calendar = ResourceCalendar(time_zone=10.0, peak_load=0.6, off_peak_load=0.1)
    # 00:00 at the epoch is 10:00 local
    assert calendar.load(0.0) == 0.6


def test_calendar_boundaries():
    calendar = ResourceCalendar(peak_load=0.5)
    assert calendar.next_change(0.0) == 9 * HOUR
    assert calendar.next_change(9 * HOUR) == 17 * HOUR
    assert calendar.next_change(20 * HOUR) == DAY
    assert ResourceCalendar().next_change(0.0) is None


@pytest.mark.parametrize("policy", ["time_shared", "space_shared"])
def test_load_change_slows_running_gridlet(policy):
    calendar = ResourceCalendar(peak_load=0.5)
    # 32400 s at 100 MIPS, then 3600 s at 50 MIPS
    length = 100.0 * 9 * HOUR + 50.0 * HOUR
    _, resource, (gl,) = direct_run(policy, lengths=[length], arrivals=[0.0], n_pes=1, mips=100.0,
                                    calendar=calendar)
    assert gl.finish_time == pytest.approx(10 * HOUR)
    assert resource.finished[0].credited_mi == pytest.approx(length)


def test_resource_answers_dynamics_and_status_queries():
    engine = Engine()
    resource = GridResource("R0", single_machine(1, 1.0))
    replies = []

    def client(self):
        self.send(resource.id, Tags.GRIDLET_SUBMIT, Gridlet(0, 10.0, owner=self.id))
        yield self.hold(1.0)
        self.send_control(resource.id, Tags.RESOURCE_DYNAMICS)
        ev = yield self.wait_for_event(lambda e: e.tag == Tags.RESOURCE_DYNAMICS)
        replies.append(ev.payload)
        self.send_control(resource.id, Tags.GRIDLET_STATUS, 0)
        ev = yield self.wait_for_event(lambda e: e.tag == Tags.GRIDLET_STATUS)
        replies.append(ev.payload)
        ev = yield self.wait_for_event(lambda e: e.tag == Tags.GRIDLET_RETURN)
        replies.append(ev.payload.status)
        self.send_control(resource.id, Tags.END_OF_SIMULATION)

    engine.register(resource)
    engine.register(ScriptedNet("U0", client))
    engine.run()

    assert replies == [ResourceDynamics(1, 0, 0.0), (0, GridletStatus.INEXEC),
                       GridletStatus.SUCCESS]
