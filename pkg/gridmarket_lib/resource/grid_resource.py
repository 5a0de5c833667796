import itertools
from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, List, Optional

from ..application import Gridlet, GridletStatus
from ..errors import NoFreePE, ProtocolError
from ..kernel import Event
from ..net import NetEntity, Tags
from ..options import SimulationOptions
from ..utils import ENTITY_BAUD_RATE, get_logger
from .calendar import ResourceCalendar, effective_mips
from .machine import AllocationPolicy, PEStatus, ResourceCharacteristics
from .share import (CompletionForecast, ResidentGridlet, forecast_next_completion,
                    pe_share_allocation, share_order)

logger = get_logger(__name__)


@dataclass(frozen=True)
class CompletionTick:
    """Payload of a self-addressed completion event."""
    tag: int
    gridlet_id: Optional[int] = None


@dataclass
class ResourceDynamics:
    n_executing: int
    n_queued: int
    effective_load: float


class GridResource(NetEntity):
    """
    A grid resource executing gridlets under its allocation policy.

    Time-shared resources run every resident gridlet at once and keep one
    forecast for the earliest completion. Space-shared resources run one
    gridlet per PE and queue the rest in arrival order.
    """

    def __init__(self, name: str, characteristics: ResourceCharacteristics,
                 calendar: Optional[ResourceCalendar] = None,
                 baud_rate: float = ENTITY_BAUD_RATE,
                 options: Optional[SimulationOptions] = None,
                 gis: Optional[int] = None):
        super().__init__(name, baud_rate, options)
        self.characteristics = characteristics
        self.calendar = calendar
        self.gis = gis
        self.forecast = CompletionForecast()
        self.finished: List[ResidentGridlet] = []
        self.submitted = 0
        self.returned = 0
        self._arrivals = itertools.count()
        # time-shared state
        self._exec: List[ResidentGridlet] = []
        self._last_update = 0.0
        self._rate = characteristics.pe_mips
        # space-shared state
        self._running: Dict[int, ResidentGridlet] = {}
        self._queue: Deque[ResidentGridlet] = deque()

    @property
    def policy(self) -> AllocationPolicy:
        return self.characteristics.policy

    @property
    def is_time_shared(self) -> bool:
        return self.policy is AllocationPolicy.TIME_SHARED

    @property
    def resident(self) -> List[ResidentGridlet]:
        if self.is_time_shared:
            return list(self._exec)
        return list(self._running.values()) + list(self._queue)

    # ---------- EVENT LOOP ----------

    def body(self):
        self._last_update = self.clock
        self._rate = self._pe_rate(self.characteristics.pe_mips)
        if self.gis is not None:
            self.send_control(self.gis, Tags.REGISTER_RESOURCE, self.id,
                              bypass_network=self.options.gis_bypass_network)
        self._schedule_load_change()

        while True:
            ev = yield self.wait_for_event()
            if ev.tag == Tags.END_OF_SIMULATION:
                logger.debug("%s stopping with %d resident gridlets", self.name, len(self.resident))
                return
            if ev.tag in (Tags.GRIDLET_SUBMIT, Tags.INTERNAL_COMPLETION, Tags.LOAD_CHANGE):
                if self.is_time_shared:
                    self.time_shared_handle(ev)
                else:
                    self.space_shared_handle(ev)
            elif ev.tag == Tags.RESOURCE_CHARACTERISTICS:
                self.send_control(ev.source, Tags.RESOURCE_CHARACTERISTICS, self.characteristics)
            elif ev.tag == Tags.RESOURCE_DYNAMICS:
                self.send_control(ev.source, Tags.RESOURCE_DYNAMICS, self.dynamics())
            elif ev.tag == Tags.GRIDLET_STATUS:
                self.send_control(ev.source, Tags.GRIDLET_STATUS,
                                  (ev.payload, self.gridlet_status(ev.payload)))
            else:
                logger.warning("%s ignored event with tag %s from %s", self.name, ev.tag, ev.source)

    def dynamics(self) -> ResourceDynamics:
        if self.is_time_shared:
            executing, queued = len(self._exec), 0
        else:
            executing, queued = len(self._running), len(self._queue)
        load = self.calendar.load(self.clock) if self.calendar is not None else 0.0
        return ResourceDynamics(executing, queued, load)

    def gridlet_status(self, gridlet_id) -> Optional[GridletStatus]:
        for rg in itertools.chain(self.resident, self.finished):
            if rg.gridlet.id == gridlet_id:
                return rg.gridlet.status
        return None

    # ---------- TIME-SHARED ----------

    def time_shared_handle(self, ev: Event) -> None:
        if ev.tag == Tags.GRIDLET_SUBMIT:
            rg = self._admit(ev)
            self._advance_shares()
            rg.gridlet.exec_start_time = self.clock
            rg.gridlet.status = GridletStatus.INEXEC
            self._exec.append(rg)
            self._reforecast()
        elif ev.tag == Tags.INTERNAL_COMPLETION:
            tick = self._tick(ev)
            if tick.tag != self.forecast.latest_tag:
                logger.debug("%s discarded stale completion tag %d", self.name, tick.tag)
                return
            ordered = share_order(self._exec)
            self._advance_shares()
            target = ordered[0]
            done = [rg for rg in ordered if rg is target or rg.done]
            for rg in done:
                rg.debit(rg.remaining_mi)
                self._exec.remove(rg)
                self._complete(rg)
            self._reforecast()
        elif ev.tag == Tags.LOAD_CHANGE:
            self._advance_shares()
            self._reforecast()
            self._schedule_load_change()

    def _advance_shares(self) -> None:
        """Credits every executing gridlet with its share since the last update."""
        now = self.clock
        duration = now - self._last_update
        if duration > 0 and self._exec:
            table = pe_share_allocation(duration, len(self._exec),
                                        self.characteristics.n_pes, self._rate)
            for rank, rg in enumerate(share_order(self._exec)):
                rg.debit(table.share_of(rank))
                rg.last_update = now
        self._last_update = now
        self._rate = self._pe_rate(self.characteristics.pe_mips)

    def _reforecast(self) -> None:
        tag = self.forecast.issue()
        if not self._exec:
            self.forecast.forecast_time = None
            return
        when = forecast_next_completion(self._exec, self.characteristics.n_pes, self._rate,
                                        self.clock)
        self.forecast.forecast_time = when
        self.schedule(self.id, when - self.clock, Tags.INTERNAL_COMPLETION, CompletionTick(tag))

    # ---------- SPACE-SHARED ----------

    def space_shared_handle(self, ev: Event) -> None:
        if ev.tag == Tags.GRIDLET_SUBMIT:
            rg = self._admit(ev)
            if self._has_free_pe():
                self.allocate_pe_to_gridlet(rg)
            else:
                rg.gridlet.status = GridletStatus.QUEUED
                self._queue.append(rg)
        elif ev.tag == Tags.INTERNAL_COMPLETION:
            tick = self._tick(ev)
            rg = self._running.get(tick.gridlet_id)
            if rg is None or rg.tag != tick.tag:
                logger.debug("%s discarded stale completion tag %d", self.name, tick.tag)
                return
            rg.debit(rg.remaining_mi)
            self._release_pe(rg)
            del self._running[rg.gridlet.id]
            self._complete(rg)
            if self._queue:
                self.allocate_pe_to_gridlet(self._queue.popleft())
        elif ev.tag == Tags.LOAD_CHANGE:
            now = self.clock
            for rg in self._running.values():
                rg.debit((now - rg.last_update) * rg.rate)
                self._schedule_pe_completion(rg)
            self._schedule_load_change()

    def allocate_pe_to_gridlet(self, rg: ResidentGridlet) -> None:
        for machine in self.characteristics.machines:
            pe = machine.free_pe()
            if pe is not None:
                break
        else:
            raise NoFreePE(f"{self.name} has no free PE for gridlet {rg.gridlet.id}")

        pe.status = PEStatus.BUSY
        rg.machine_id, rg.pe_id = machine.id, pe.id
        gl = rg.gridlet
        gl.exec_start_time = self.clock
        gl.status = GridletStatus.INEXEC
        self._running[gl.id] = rg
        self._schedule_pe_completion(rg)

    def _schedule_pe_completion(self, rg: ResidentGridlet) -> None:
        pe = self._pe_of(rg)
        rg.last_update = self.clock
        rg.rate = self._pe_rate(pe.mips_rating)
        rg.tag = self.forecast.issue()
        delay = rg.remaining_mi / rg.rate
        self.forecast.forecast_time = self.clock + delay
        self.schedule(self.id, delay, Tags.INTERNAL_COMPLETION,
                      CompletionTick(rg.tag, rg.gridlet.id))

    def _has_free_pe(self) -> bool:
        return any(m.free_pe() is not None for m in self.characteristics.machines)

    def _pe_of(self, rg: ResidentGridlet):
        machine = next(m for m in self.characteristics.machines if m.id == rg.machine_id)
        return next(pe for pe in machine.pes if pe.id == rg.pe_id)

    def _release_pe(self, rg: ResidentGridlet) -> None:
        self._pe_of(rg).status = PEStatus.FREE

    # ---------- SHARED HELPERS ----------

    def _pe_rate(self, rating: float) -> float:
        return effective_mips(rating, self.calendar, self.clock)

    def _admit(self, ev: Event) -> ResidentGridlet:
        gl = ev.payload
        if not isinstance(gl, Gridlet):
            raise ProtocolError(f"{self.name}: GRIDLET_SUBMIT carried {type(gl).__name__}")
        if gl.owner is None:
            raise ProtocolError(f"{self.name}: gridlet {gl.id} has no owner to return to")
        self.submitted += 1
        gl.arrival_time = self.clock
        gl.resource_id = self.id
        return ResidentGridlet.admit(gl, self.clock, next(self._arrivals))

    def _tick(self, ev: Event) -> CompletionTick:
        if not isinstance(ev.payload, CompletionTick):
            raise ProtocolError(f"{self.name}: malformed completion event {ev.payload!r}")
        return ev.payload

    def _complete(self, rg: ResidentGridlet) -> None:
        gl = rg.gridlet
        now = self.clock
        gl.finish_time = now
        gl.wall_clock = now - gl.arrival_time
        gl.cpu_time = now - gl.exec_start_time
        gl.status = GridletStatus.SUCCESS
        self.finished.append(rg)
        self.returned += 1
        size = gl.output_size_bytes if self.options.return_uses_output_size else 0
        self.send(gl.owner, Tags.GRIDLET_RETURN, gl, size)

    def _schedule_load_change(self) -> None:
        if self.calendar is None:
            return
        when = self.calendar.next_change(self.clock)
        if when is not None:
            self.schedule(self.id, when - self.clock, Tags.LOAD_CHANGE)
