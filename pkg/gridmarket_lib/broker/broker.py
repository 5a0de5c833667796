from collections import deque
from typing import Dict, List, Optional

from ..application import Gridlet, GridletStatus
from ..errors import InfeasibleDeadline, ProtocolError
from ..kernel import Event
from ..net import NetEntity, Tags
from ..options import SimulationOptions
from ..stats import send_stat
from ..utils import ENTITY_BAUD_RATE, get_logger
from .experiment import Experiment, ExperimentStatus, ResourceUsage
from .planning import (BrokerResourceRecord, SchedulePlan, compute_budget, compute_deadline,
                       dispatch_count, rank_by_cost, schedule_advisor)

logger = get_logger(__name__)


def is_return(ev: Event) -> bool:
    return ev.tag == Tags.GRIDLET_RETURN


class Broker(NetEntity):
    """
    Resource broker acting for one user: discovers and prices resources,
    derives the constraints, then runs the advisor, dispatcher and receiver
    until the batch is done or the deadline or budget runs out.
    """

    def __init__(self, name: str, user_name: str, gis: Optional[int] = None,
                 stats: Optional[int] = None, baud_rate: float = ENTITY_BAUD_RATE,
                 options: Optional[SimulationOptions] = None):
        super().__init__(name, baud_rate, options)
        self.user_name = user_name
        self.gis = gis
        self.stats = stats
        self.records: List[BrokerResourceRecord] = []
        self.experiment: Optional[Experiment] = None
        self._owner_of: Dict[int, BrokerResourceRecord] = {}
        self._dispatch_times: Dict[int, float] = {}
        self._committed_logged: Dict[int, int] = {}

    @property
    def expenses(self) -> float:
        return sum(r.expenses for r in self.records)

    @property
    def dispatched(self) -> int:
        return sum(r.dispatched for r in self.records)

    def body(self):
        ev = yield self.wait_for_event(lambda e: e.tag == Tags.EXPERIMENT)
        experiment = yield from self.broker_run(ev.payload)
        self.send_control(ev.source, Tags.EXPERIMENT, experiment)
        yield self.wait_for_event(lambda e: e.tag == Tags.END_OF_SIMULATION)

    # ---------- MAIN LOOP ----------

    def broker_run(self, experiment: Experiment):
        self.experiment = experiment
        experiment.start_time = self.clock
        experiment.status = ExperimentStatus.RUNNING
        batch = experiment.gridlets

        if len(batch) == 0:
            experiment.deadline_time = self.clock + (experiment.deadline or 0.0)
            self._finish(ExperimentStatus.COMPLETED)
            return experiment

        yield from self._discover_and_trade()
        if not self.records:
            logger.info("%s found no resources", self.name)
            self._finish(ExperimentStatus.NO_RESOURCES)
            return experiment

        if experiment.uses_factors:
            chars = [r.characteristics for r in self.records]
            try:
                experiment.deadline = compute_deadline(batch, chars, experiment.d_factor)
                experiment.budget = compute_budget(batch, chars, experiment.b_factor,
                                                   experiment.deadline)
            except InfeasibleDeadline as e:
                logger.info("%s: %s", self.name, e)
                self._finish(ExperimentStatus.INFEASIBLE)
                return experiment
        experiment.deadline_time = experiment.start_time + experiment.deadline
        deadline, budget = experiment.deadline_time, experiment.budget

        status = ExperimentStatus.COMPLETED
        while True:
            unfinished = batch.unfinished()
            if not unfinished:
                break
            if self.clock >= deadline:
                logger.info("%s reached its deadline with %d gridlets left", self.name, len(unfinished))
                status = ExperimentStatus.DEADLINE_EXHAUSTED
                break
            if self.expenses >= budget:
                logger.info("%s spent its budget with %d gridlets left", self.name, len(unfinished))
                status = ExperimentStatus.BUDGET_EXHAUSTED
                break

            plan = schedule_advisor(self.records, unfinished, self.clock, deadline, budget,
                                    self.expenses)
            self._apply_plan(plan)
            sent = sum(self.dispatcher(r) for r in rank_by_cost(self.records))
            received = sum(self.receiver(ev) for ev in self.poll_events(is_return))
            if sent == 0 and received == 0:
                # next scheduling period, or earlier if a result comes back
                timeout = max(0.01 * (deadline - self.clock), 1.0)
                ev = yield self.wait_for_event(is_return, timeout)
                if ev is not None:
                    self.receiver(ev)

        # jobs already staged are awaited, not cancelled
        while any(r.in_flight for r in self.records):
            ev = yield self.wait_for_event(is_return)
            self.receiver(ev)

        self._finish(status if batch.unfinished() else ExperimentStatus.COMPLETED)
        return experiment

    def _discover_and_trade(self):
        if self.gis is None:
            return
        self.send_control(self.gis, Tags.RESOURCE_LIST,
                          bypass_network=self.options.gis_bypass_network)
        ev = yield self.wait_for_event(lambda e: e.tag == Tags.RESOURCE_LIST)
        resource_ids = list(ev.payload or [])
        for rid in resource_ids:
            self.send_control(rid, Tags.RESOURCE_CHARACTERISTICS)

        replies = {}
        while len(replies) < len(resource_ids):
            ev = yield self.wait_for_event(lambda e: e.tag == Tags.RESOURCE_CHARACTERISTICS)
            replies[ev.source] = ev.payload

        for order, rid in enumerate(resource_ids):
            identity = self.engine.entity(rid).identity
            self.records.append(BrokerResourceRecord(identity, replies[rid], order))
        self.records = rank_by_cost(self.records)

    # ---------- ADVISOR / DISPATCHER / RECEIVER ----------

    def _apply_plan(self, plan: SchedulePlan) -> None:
        by_id = self.experiment.gridlets.by_id()
        for record in self.records:
            ids = plan.assignments.get(record.resource.id, [])
            record.pending = deque(by_id[i] for i in ids)
            committed = record.committed
            if self._committed_logged.get(record.resource.id) != committed:
                self._committed_logged[record.resource.id] = committed
                send_stat(self, self.stats, self._category(record, "Committed"), committed)

    def dispatcher(self, record: BrokerResourceRecord) -> int:
        count = dispatch_count(record, self.options.max_gridlet_per_pe)
        now = self.clock
        for _ in range(count):
            gl = record.pending.popleft()
            gl.owner = self.id
            gl.status = GridletStatus.SUBMITTED
            gl.submission_time = now
            record.in_flight[gl.id] = gl
            record.dispatched += 1
            if record.first_dispatch_time is None:
                record.first_dispatch_time = now
            self._owner_of[gl.id] = record
            self._dispatch_times[gl.id] = now
            self.send(record.resource.id, Tags.GRIDLET_SUBMIT, gl, gl.input_size_bytes)
        return count

    def receiver(self, ev: Event) -> int:
        gl = ev.payload
        if not isinstance(gl, Gridlet):
            raise ProtocolError(f"{self.name}: GRIDLET_RETURN carried {type(gl).__name__}")
        record = self._owner_of.pop(gl.id, None)
        if record is None or gl.id not in record.in_flight:
            raise ProtocolError(f"{self.name}: unexpected return of gridlet {gl.id}")
        cost = record.record_return(gl, self.clock, self._dispatch_times.pop(gl.id))
        gl.status = GridletStatus.SUCCESS
        gl.processing_cost = cost
        send_stat(self, self.stats, self._category(record, "GridletsCompleted"), record.completed)
        send_stat(self, self.stats, self._category(record, "BudgetSpent"), record.expenses)
        return 1

    # ---------- RESULTS ----------

    def _category(self, record: BrokerResourceRecord, name: str) -> str:
        return f"{self.user_name}.RESOURCE.{record.resource.name}.{name}"

    def _finish(self, status: ExperimentStatus) -> None:
        experiment = self.experiment
        experiment.status = status
        experiment.end_time = self.clock
        experiment.expenses = self.expenses
        experiment.usage = {r.resource.name: ResourceUsage(r.completed, r.expenses)
                            for r in self.records}
        prefix = f"{self.user_name}.USER"
        send_stat(self, self.stats, f"{prefix}.TimeUtilization", experiment.time_utilization)
        send_stat(self, self.stats, f"{prefix}.GridletCompletionFactor",
                  experiment.completion_factor)
        send_stat(self, self.stats, f"{prefix}.BudgetUtilization", experiment.budget_utilization)
        logger.debug("%s finished %s: %d/%d gridlets, %.2f G$", self.name, status.value,
                     experiment.completed, len(experiment.gridlets), experiment.expenses)
