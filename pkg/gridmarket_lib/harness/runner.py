import concurrent.futures
import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from ..application import Gridlet, GridletBatch, synth_workload
from ..broker import Experiment, ExperimentStatus, Release
from ..core import MarketSimulation
from ..errors import ConfigError, ReportIoError
from ..kernel import SimulationReport
from ..resource import Machine, ResourceCalendar, ResourceCharacteristics
from ..utils import derive_user_seed, get_logger
from .config import ResourceSpec, ScenarioConfig, UserSpec

logger = get_logger(__name__)

RESULT_COLUMNS = ["user_count", "deadline", "budget", "user_id", "completed", "time_utilized",
                  "budget_spent", "termination_time", "resource", "resource_completed", "status"]

DEFAULT_REPORT_CATEGORIES = ["*.USER.*", "*.GRIDLET.*", "*.RESOURCE.*.*"]

FAILED_STATUSES = (ExperimentStatus.INFEASIBLE, ExperimentStatus.NO_RESOURCES)

Cell = Tuple[Optional[int], Optional[float], Optional[float]]


@dataclass
class ResultRow:
    user_count: int
    deadline: Optional[float]
    budget: Optional[float]
    user_id: str
    gridlets_completed: int = 0
    time_utilized: float = 0.0
    budget_spent: float = 0.0
    termination_time: float = 0.0
    per_resource_completion: Dict[str, int] = field(default_factory=dict)
    status: str = "ok"
    user_index: int = 0

    def to_records(self) -> List[dict]:
        """Long form: one record per resource that completed work, else one blank one."""
        base = {
            "user_count": self.user_count, "deadline": self.deadline, "budget": self.budget,
            "user_id": self.user_id, "completed": self.gridlets_completed,
            "time_utilized": self.time_utilized, "budget_spent": self.budget_spent,
            "termination_time": self.termination_time, "status": self.status,
        }
        done = [(name, n) for name, n in self.per_resource_completion.items() if n > 0]
        if not done:
            return [{**base, "resource": "", "resource_completed": 0}]
        return [{**base, "resource": name, "resource_completed": n} for name, n in done]


# ---------- BUILDING ----------

def build_characteristics(spec: ResourceSpec) -> ResourceCharacteristics:
    machines = [Machine.homogeneous(m, spec.pes_per_machine, spec.pe_mips)
                for m in range(spec.n_machines)]
    return ResourceCharacteristics(spec.architecture, spec.os, machines, spec.policy,
                                   spec.time_zone, spec.price_per_pe_time_unit)


def build_calendar(spec: ResourceSpec, config: ScenarioConfig) -> Optional[ResourceCalendar]:
    cal = spec.calendar
    if cal is None:
        return None
    return ResourceCalendar(time_zone=spec.time_zone, weekends=frozenset(cal.weekends),
                            holidays=frozenset(cal.holidays), peak_load=cal.peak_load,
                            off_peak_load=cal.off_peak_load, holiday_load=cal.holiday_load,
                            peak_start_hour=cal.peak_start_hour, peak_end_hour=cal.peak_end_hour,
                            epoch=config.options.calendar_epoch)


def cell_users(config: ScenarioConfig, user_count: Optional[int]) -> List[Tuple[str, UserSpec]]:
    if user_count is None:
        return [(u.name or f"U{i}", u) for i, u in enumerate(config.users)]
    template = config.users[0]
    return [(f"U{i}", template) for i in range(user_count)]


def build_experiment(user: UserSpec, seed: int, standard_pe_mips: float,
                     deadline: Optional[float], budget: Optional[float]) -> Experiment:
    if user.n_gridlets == 0:
        batch = GridletBatch([])
    else:
        batch = synth_workload(user.n_gridlets, user.base_time_units, user.variation,
                               standard_pe_mips, seed, user.input_size_bytes,
                               user.output_size_bytes)
    if deadline is not None or budget is not None:
        return Experiment(batch, deadline=deadline if deadline is not None else user.deadline,
                          budget=budget if budget is not None else user.budget)
    if user.d_factor is not None or user.b_factor is not None:
        return Experiment(batch, d_factor=user.d_factor, b_factor=user.b_factor)
    return Experiment(batch, deadline=user.deadline, budget=user.budget)


def build_simulation(config: ScenarioConfig, cell: Cell = (None, None, None),
                     report_categories: Optional[Iterable[str]] = None) -> MarketSimulation:
    user_count, deadline, budget = cell
    sim = MarketSimulation(config.options, report_categories)
    users = cell_users(config, user_count)
    if config.seed == 0 and sum(not u.is_direct for _, u in users) > 1:
        logger.warning("seed 0 derives the same workload seed for every user")
    for spec in config.resources:
        sim.add_resource(spec.name, build_characteristics(spec), build_calendar(spec, config),
                         spec.baud_rate)
    for i, (name, user) in enumerate(users):
        if user.is_direct:
            releases = [Release(Gridlet(j, g.length_mi, g.input_size_bytes, g.output_size_bytes),
                                g.release_time)
                        for j, g in enumerate(user.gridlets)]
            sim.add_direct_user(name, user.target, releases, user.start_delay, user.baud_rate)
        else:
            seed = derive_user_seed(config.seed, i)
            experiment = build_experiment(user, seed, config.options.standard_pe_mips,
                                          deadline, budget)
            sim.add_user(name, experiment, user.start_delay, user.baud_rate)
    return sim


# ---------- RUNNING ----------

def collect_rows(sim: MarketSimulation, cell: Cell) -> List[ResultRow]:
    user_count = cell[0] if cell[0] is not None else len(sim.users)
    rows = []
    for index, user in enumerate(sim.users):
        if user.broker is None:
            returned = user.returned
            finish = max((gl.finish_time for gl in returned), default=user.start_delay)
            target = sim.engine.entity(user.target).name
            rows.append(ResultRow(user_count, None, None, user.name, len(returned),
                                  finish - user.start_delay, 0.0, finish,
                                  {target: len(returned)}, user_index=index))
            continue
        exp = user.result
        rows.append(ResultRow(
            user_count, exp.deadline, exp.budget, user.name,
            gridlets_completed=exp.completed,
            time_utilized=(exp.end_time or 0.0) - (exp.start_time or 0.0),
            budget_spent=exp.expenses,
            termination_time=exp.end_time or 0.0,
            per_resource_completion={name: u.completed for name, u in exp.usage.items()},
            status=exp.status.value if exp.status in FAILED_STATUSES else "ok",
            user_index=index,
        ))
    return rows


def run_cell(config: ScenarioConfig, cell: Cell = (None, None, None),
             report_categories: Optional[Iterable[str]] = None
             ) -> Tuple[List[ResultRow], SimulationReport, MarketSimulation]:
    sim = build_simulation(config, cell, report_categories)
    report = sim.run()
    return collect_rows(sim, cell), report, sim


def run_single(config: ScenarioConfig, report_path=None,
               report_categories: Optional[Iterable[str]] = None) -> List[ResultRow]:
    """Runs the scenario once; optionally writes the statistics report."""
    if config.sweep is not None:
        raise ConfigError("run_single takes a scenario without a sweep block", field="sweep")
    categories = list(report_categories or DEFAULT_REPORT_CATEGORIES) if report_path else None
    rows, _, sim = run_cell(config, (None, None, None), categories)
    if report_path is not None:
        sim.write_report(report_path)
    return rows


def sweep_cells(config: ScenarioConfig) -> List[Cell]:
    s = config.sweep
    if s is None:
        return [(None, None, None)]
    return list(itertools.product(s.user_counts or [None], s.deadline_values or [None],
                                  s.budget_values or [None]))


def _failed_rows(config: ScenarioConfig, cell: Cell, error: Exception) -> List[ResultRow]:
    users = cell_users(config, cell[0])
    return [ResultRow(cell[0] if cell[0] is not None else len(users), cell[1], cell[2], name,
                      status=f"error: {error}", user_index=i)
            for i, (name, _) in enumerate(users)]


def run_sweep_cell(config: ScenarioConfig, cell: Cell) -> List[ResultRow]:
    try:
        rows, _, _ = run_cell(config, cell)
        return rows
    except Exception as e:
        logger.warning("sweep cell %s failed: %s", cell, e)
        return _failed_rows(config, cell, e)


def run_sweep(config: ScenarioConfig, out=None, workers: int = 1) -> List[ResultRow]:
    """Runs every cell of the sweep grid, each on its own engine."""
    if config.sweep is None:
        raise ConfigError("Sweep block missing", field="sweep")
    cells = sweep_cells(config)
    single = config.without_sweep()

    if workers <= 1:
        ordered_results = [run_sweep_cell(single, cell) for cell in cells]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            future_to_cell = {executor.submit(run_sweep_cell, single, cell): idx
                              for idx, cell in enumerate(cells)}
            # Collect results in grid order
            ordered_results = [None] * len(cells)
            for future in concurrent.futures.as_completed(future_to_cell):
                ordered_results[future_to_cell[future]] = future.result()

    rows = [row for cell_rows in ordered_results for row in cell_rows]
    if out is not None:
        emit_results(rows, out)
    return rows


# ---------- OUTPUT ----------

def results_frame(rows: Sequence[ResultRow]) -> pd.DataFrame:
    ordered = sorted(rows, key=lambda r: (r.user_count,
                                          float("-inf") if r.deadline is None else r.deadline,
                                          float("-inf") if r.budget is None else r.budget,
                                          r.user_index))
    records = [rec for row in ordered for rec in row.to_records()]
    return pd.DataFrame(records, columns=RESULT_COLUMNS)


def emit_results(rows: Sequence[ResultRow], path) -> pd.DataFrame:
    df = results_frame(rows)
    try:
        df.to_csv(path, index=False, float_format="%.12g", lineterminator="\n", encoding="utf-8")
    except OSError as e:
        raise ReportIoError(f"Cannot write results to {path}: {e}") from e
    return df
