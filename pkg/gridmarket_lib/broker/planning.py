import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Sequence

import numpy as np

from ..application import Gridlet, GridletBatch
from ..errors import InfeasibleDeadline, InvalidFactor, NoResources
from ..kernel import EntityId
from ..resource import ResourceCharacteristics
from ..utils import MAX_GRIDLET_PER_PE, MI_TOLERANCE


def cost_per_mi(r: ResourceCharacteristics) -> float:
    """G$ per MI: price per PE time unit over the PE rating."""
    return r.cost_per_pe_time_unit / r.pe_mips


# ---------- CONSTRAINTS ----------

def _lengths(batch) -> np.ndarray:
    return np.array([gl.length_mi for gl in batch], dtype=float)


def min_makespan(batch: GridletBatch, resources: Sequence[ResourceCharacteristics]) -> float:
    """Greedy earliest-finish list schedule over every PE, fastest PEs first."""
    if not resources:
        raise NoResources("No resources to estimate a makespan on")
    mips = np.array([pe.mips_rating for r in resources for _, pe in r.pes], dtype=float)
    mips = mips[np.argsort(-mips, kind="stable")]
    finish = np.zeros_like(mips)
    for length in _lengths(batch):
        candidate = finish + length / mips
        k = int(np.argmin(candidate))
        finish[k] = candidate[k]
    return float(finish.max()) if len(batch) else 0.0


def max_makespan(batch: GridletBatch, resources: Sequence[ResourceCharacteristics]) -> float:
    """Serial run on one PE of the slowest resource."""
    if not resources:
        raise NoResources("No resources to estimate a makespan on")
    slowest = min(pe.mips_rating for r in resources for _, pe in r.pes)
    return float(_lengths(batch).sum()) / slowest


def compute_deadline(batch: GridletBatch, resources: Sequence[ResourceCharacteristics],
                     d_factor: float) -> float:
    if d_factor < 0:
        raise InvalidFactor(f"D-factor must be non-negative, got {d_factor}")
    t_min = min_makespan(batch, resources)
    t_max = max_makespan(batch, resources)
    return t_min + d_factor * (t_max - t_min)


def _fill_cost(batch: GridletBatch, resources: Sequence[ResourceCharacteristics],
               deadline: float, cheapest_first: bool) -> float:
    ranked = sorted(resources, key=cost_per_mi, reverse=not cheapest_first)
    capacity = [r.n_pes * r.pe_mips * deadline for r in ranked]
    cost = 0.0
    for gl in batch:
        for i, r in enumerate(ranked):
            if gl.length_mi <= capacity[i] + MI_TOLERANCE:
                capacity[i] -= gl.length_mi
                cost += gl.length_mi * cost_per_mi(r)
                break
        else:
            raise InfeasibleDeadline(
                f"Gridlet {gl.id} ({gl.length_mi} MI) fits no resource within deadline {deadline}")
    return cost


def compute_budget(batch: GridletBatch, resources: Sequence[ResourceCharacteristics],
                   b_factor: float, deadline: float) -> float:
    if b_factor < 0:
        raise InvalidFactor(f"B-factor must be non-negative, got {b_factor}")
    if not resources:
        raise NoResources("No resources to price the batch on")
    c_min = _fill_cost(batch, resources, deadline, cheapest_first=True)
    c_max = _fill_cost(batch, resources, deadline, cheapest_first=False)
    return c_min + b_factor * (c_max - c_min)


# ---------- BROKER VIEW OF A RESOURCE ----------

@dataclass
class BrokerResourceRecord:
    resource: EntityId
    characteristics: ResourceCharacteristics
    order: int = 0
    pending: Deque[Gridlet] = field(default_factory=deque)
    in_flight: Dict[int, Gridlet] = field(default_factory=dict)
    completed_ids: List[int] = field(default_factory=list)
    dispatched: int = 0
    completed_mi: float = 0.0
    expenses: float = 0.0
    measured_share_mips: Optional[float] = None
    throughput_mips: float = 0.0
    returned_mi: float = 0.0
    residence_time: float = 0.0
    first_dispatch_time: Optional[float] = None

    def __post_init__(self):
        if self.measured_share_mips is None:
            # optimistic until the first result comes back
            self.measured_share_mips = self.characteristics.total_mips

    @property
    def cost_per_mi(self) -> float:
        return cost_per_mi(self.characteristics)

    @property
    def n_pes(self) -> int:
        return self.characteristics.n_pes

    @property
    def completed(self) -> int:
        return len(self.completed_ids)

    @property
    def committed(self) -> int:
        return len(self.in_flight) + len(self.pending)

    @property
    def assigned(self) -> List[int]:
        return (self.completed_ids + list(self.in_flight)
                + [gl.id for gl in self.pending])

    @property
    def share_estimate(self) -> float:
        return max(self.measured_share_mips, self.throughput_mips)

    def record_return(self, gl: Gridlet, now: float, dispatch_time: float) -> float:
        """Books a returned gridlet and re-measures the share; returns its cost."""
        held = len(self.in_flight)
        del self.in_flight[gl.id]
        self.completed_ids.append(gl.id)
        cost = (gl.length_mi / self.characteristics.pe_mips) * self.characteristics.cost_per_pe_time_unit
        self.expenses += cost
        self.completed_mi += gl.length_mi

        elapsed = now - self.first_dispatch_time
        if elapsed > 0:
            self.measured_share_mips = self.completed_mi / elapsed
        residence = now - dispatch_time
        self.returned_mi += gl.length_mi
        self.residence_time += residence
        if self.residence_time > 0:
            self.throughput_mips = self.returned_mi / self.residence_time * held
        return cost


# ---------- ADVISOR ----------

@dataclass
class SchedulePlan:
    assignments: Dict[int, List[int]] = field(default_factory=dict)
    unassigned: List[int] = field(default_factory=list)
    consumable: Dict[int, int] = field(default_factory=dict)

    @property
    def total_assigned(self) -> int:
        return sum(len(ids) for ids in self.assignments.values())

    @property
    def is_empty(self) -> bool:
        return self.total_assigned == 0


def rank_by_cost(records: Sequence[BrokerResourceRecord]) -> List[BrokerResourceRecord]:
    return sorted(records, key=lambda r: (r.cost_per_mi, r.order))


def schedule_advisor(records: Sequence[BrokerResourceRecord], unfinished: Sequence[Gridlet],
                     clock: float, deadline: float, budget: float,
                     expenses: float) -> SchedulePlan:
    """
    Cost-optimising plan for the window up to `deadline`.

    Each resource may hold as many jobs as it is predicted to consume by the
    deadline. Extra undispatched jobs are reclaimed first; the unassigned
    queue is then handed out cheapest resource first while the projected
    spend stays within budget. A resource with spare room and an empty
    queue takes undispatched jobs from the costliest resources.
    """
    ranked = rank_by_cost(records)
    pending = {r.resource.id: list(r.pending) for r in ranked}
    held = {gl.id for r in ranked for gl in itertools.chain(r.in_flight.values(), r.pending)}

    if expenses >= budget or clock >= deadline or not ranked:
        unassigned = [gl.id for gl in unfinished
                      if not any(gl.id in r.in_flight for r in ranked)]
        return SchedulePlan({r.resource.id: [] for r in ranked}, unassigned,
                            {r.resource.id: 0 for r in ranked})

    queue = [gl for gl in unfinished if gl.id not in held]
    time_left = deadline - clock
    mean_mi = float(np.mean([gl.length_mi for gl in unfinished])) if unfinished else 0.0
    consumable = {}
    for r in ranked:
        predicted = r.share_estimate * time_left / mean_mi if mean_mi > 0 else 0.0
        consumable[r.resource.id] = int(math.floor(predicted + 1e-9))

    reclaimed = []
    for r in ranked:
        rid = r.resource.id
        excess = len(r.in_flight) + len(pending[rid]) - consumable[rid]
        while excess > 0 and pending[rid]:
            reclaimed.append(pending[rid].pop())
            excess -= 1
    queue = sorted(reclaimed, key=lambda gl: gl.id) + queue

    projected = expenses + sum(
        gl.length_mi * r.cost_per_mi
        for r in ranked for gl in itertools.chain(r.in_flight.values(), pending[r.resource.id]))

    for i, r in enumerate(ranked):
        rid = r.resource.id
        while len(r.in_flight) + len(pending[rid]) < consumable[rid]:
            if queue:
                cost = queue[0].length_mi * r.cost_per_mi
                if projected + cost > budget:
                    break
                pending[rid].append(queue.pop(0))
                projected += cost
                continue
            donor = next((d for d in reversed(ranked[i + 1:])
                          if pending[d.resource.id] and d.cost_per_mi > r.cost_per_mi), None)
            if donor is None:
                break
            gl = pending[donor.resource.id].pop()
            pending[rid].append(gl)
            projected += gl.length_mi * (r.cost_per_mi - donor.cost_per_mi)

    return SchedulePlan({rid: [gl.id for gl in gls] for rid, gls in pending.items()},
                        [gl.id for gl in queue], consumable)


def dispatch_count(record: BrokerResourceRecord,
                   max_gridlet_per_pe: int = MAX_GRIDLET_PER_PE) -> int:
    """Jobs that may be staged now without exceeding the per-PE limit."""
    slots = max_gridlet_per_pe * record.n_pes - len(record.in_flight)
    return max(0, min(slots, len(record.pending)))
