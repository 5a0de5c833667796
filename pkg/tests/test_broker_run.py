import pandas as pd
import pytest

from gridmarket_lib.broker import ExperimentStatus
from gridmarket_lib.harness import (ResourceSpec, ScenarioConfig, SweepSpec, UserSpec,
                                    emit_results, preset_wwg, preset_wwg_sweep, run_cell,
                                    run_sweep)
from gridmarket_lib.harness.presets import BUDGET_GRID, DEADLINE_GRID


@pytest.fixture(scope="module")
def cheapest_run():
    return run_cell(preset_wwg(deadline=3100, budget=22000, n_gridlets=200, seed=0))


def test_relaxed_deadline_runs_everything_on_cheapest(cheapest_run):
    rows, _, sim = cheapest_run
    exp = sim.experiments[0]
    assert exp.status is ExperimentStatus.COMPLETED
    assert exp.completed == 200
    assert {gl.resource_id for gl in exp.gridlets} == {sim.engine.entity_id("R8")}
    assert rows[0].per_resource_completion["R8"] == 200
    assert exp.end_time - exp.start_time <= 3100


def test_expenses_match_returned_work(cheapest_run):
    _, _, sim = cheapest_run
    exp = sim.experiments[0]
    assert exp.expenses == pytest.approx(sum(gl.processing_cost for gl in exp.gridlets))
    assert exp.expenses == pytest.approx(exp.gridlets.total_mi / 380.0)
    assert exp.usage["R8"].spent == pytest.approx(exp.expenses)
    assert exp.budget_utilization == pytest.approx(exp.expenses / 22000)


def test_tight_constraints_process_fewer():
    _, _, sim = run_cell(preset_wwg(deadline=100, budget=5000))
    exp = sim.experiments[0]
    assert exp.completed < 200
    assert exp.expenses <= 5000 + 1e-6
    submitted = [gl.submission_time for gl in exp.gridlets if gl.submission_time is not None]
    assert submitted and max(submitted) < exp.deadline_time


def test_empty_batch_completes_at_once():
    rows, _, sim = run_cell(preset_wwg(n_gridlets=0))
    exp = sim.experiments[0]
    assert exp.status is ExperimentStatus.COMPLETED
    assert exp.expenses == 0.0
    assert rows[0].gridlets_completed == 0
    assert rows[0].status == "ok"


def test_constraints_from_factors():
    config = ScenarioConfig(
        resources=[ResourceSpec("R0", pe_mips=100, price_per_pe_time_unit=1),
                   ResourceSpec("R1", pe_mips=200, price_per_pe_time_unit=3)],
        users=[UserSpec("U0", n_gridlets=10, base_time_units=1.0, variation=0.0,
                        d_factor=0.5, b_factor=0.5)],
    )
    _, _, sim = run_cell(config)
    exp = sim.experiments[0]
    # T_MIN 3.5, T_MAX 10; C_MIN 12, C_MAX 15
    assert exp.deadline == pytest.approx(6.75)
    assert exp.budget == pytest.approx(13.5)
    assert exp.expenses <= exp.budget + 1e-9
    assert exp.completed > 0


def single_resource_config(deadline, budget):
    return ScenarioConfig(
        resources=[ResourceSpec("R0", pe_mips=100, price_per_pe_time_unit=1)],
        users=[UserSpec("U0", n_gridlets=5, base_time_units=100.0, variation=0.0,
                        deadline=deadline, budget=budget)],
    )


@pytest.mark.parametrize("deadline, budget, status", [
    (150.0, 1e6, ExperimentStatus.DEADLINE_EXHAUSTED),
    (10000.0, 100.0, ExperimentStatus.BUDGET_EXHAUSTED),
])
def test_exhausted_constraints(deadline, budget, status):
    # each job takes 100 time units and costs 100 G$
    rows, _, sim = run_cell(single_resource_config(deadline, budget))
    exp = sim.experiments[0]
    assert exp.status is status
    assert exp.completed == 1
    assert rows[0].status == "ok"


def test_runs_are_reproducible(tmp_path):
    config = preset_wwg(deadline=600, budget=8000, n_gridlets=40, seed=5)
    paths, digests = [], []
    for i in range(2):
        rows, report, _ = run_cell(config)
        paths.append(tmp_path / f"results{i}.csv")
        emit_results(rows, paths[-1])
        digests.append(report.trace_digest)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert digests[0] == digests[1]


def test_sweep_cells_are_independent():
    sweep = SweepSpec(deadline_values=[300, 900], budget_values=[3000])
    config = preset_wwg(n_gridlets=20, seed=2, sweep=sweep)
    swept = run_sweep(config)
    alone = [row for d in (300, 900)
             for row in run_cell(config.without_sweep(), (None, d, 3000))[0]]
    assert [r.to_records() for r in swept] == [r.to_records() for r in alone]


def test_parallel_sweep_matches_serial():
    sweep = SweepSpec(deadline_values=[300, 900], budget_values=[3000, 6000])
    config = preset_wwg(n_gridlets=20, seed=2, sweep=sweep)
    serial = run_sweep(config, workers=1)
    parallel = run_sweep(config, workers=2)
    assert [r.to_records() for r in serial] == [r.to_records() for r in parallel]


# ---------- FULL EXPERIMENTS ----------

@pytest.fixture(scope="module")
def budget_deadline_grid(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep") / "results.csv"
    run_sweep(preset_wwg_sweep(seed=0), out=out, workers=4)
    return out


@pytest.mark.slow
def test_grid_results_file(budget_deadline_grid):
    df = pd.read_csv(budget_deadline_grid, keep_default_na=False)
    cells = df.drop_duplicates(["deadline", "budget"])
    assert len(cells) == len(DEADLINE_GRID) * len(BUDGET_GRID) == 144
    assert set(df["status"]) == {"ok"}


@pytest.mark.slow
def test_more_budget_never_processes_less(budget_deadline_grid):
    df = pd.read_csv(budget_deadline_grid, keep_default_na=False)
    cells = df.drop_duplicates(["deadline", "budget"])
    at_100 = cells[cells["deadline"] == 100].sort_values("budget")["completed"].tolist()
    assert at_100 == sorted(at_100)


@pytest.mark.slow
def test_more_time_never_processes_less(budget_deadline_grid):
    df = pd.read_csv(budget_deadline_grid, keep_default_na=False)
    cells = df.drop_duplicates(["deadline", "budget"])
    at_5000 = cells[cells["budget"] == 5000].sort_values("deadline")["completed"].tolist()
    assert at_5000 == sorted(at_5000)


@pytest.mark.slow
def test_contention_lowers_per_user_completion():
    sweep = SweepSpec(user_counts=[1, 10, 20], deadline_values=[3100], budget_values=[22000])
    rows = run_sweep(preset_wwg(sweep=sweep), workers=3)
    means = [pd.Series([r.gridlets_completed for r in rows if r.user_count == n]).mean()
             for n in (1, 10, 20)]
    assert means[0] == 200
    assert means[0] >= means[1] >= means[2]
