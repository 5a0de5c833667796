from dataclasses import dataclass
from typing import Iterable, List, Optional

from ..application import Gridlet
from ..errors import InvalidDelay, InvalidResource, NoWork
from ..utils import MI_TOLERANCE


@dataclass
class ShareTable:
    max_share_mi: float
    min_share_mi: float
    n_max_share_gridlets: int

    def share_of(self, rank: int) -> float:
        """Share of the gridlet at position `rank` in smallest-remaining order."""
        return self.max_share_mi if rank < self.n_max_share_gridlets else self.min_share_mi


@dataclass
class ResidentGridlet:
    """Resource-side record of a gridlet and the work still owed to it."""
    gridlet: Gridlet
    arrival_time: float
    remaining_mi: float
    arrival_seq: int = 0
    machine_id: Optional[int] = None
    pe_id: Optional[int] = None
    last_update: float = 0.0
    rate: float = 0.0
    tag: Optional[int] = None
    credited_mi: float = 0.0

    @classmethod
    def admit(cls, gridlet: Gridlet, now: float, arrival_seq: int) -> "ResidentGridlet":
        return cls(gridlet, now, float(gridlet.length_mi), arrival_seq, last_update=now)

    def debit(self, mi: float) -> float:
        """Credits up to `mi` of work; returns what was actually applied."""
        applied = min(max(mi, 0.0), self.remaining_mi)
        self.remaining_mi -= applied
        if self.remaining_mi <= MI_TOLERANCE:
            applied += self.remaining_mi
            self.remaining_mi = 0.0
        self.credited_mi += applied
        return applied

    @property
    def done(self) -> bool:
        return self.remaining_mi <= MI_TOLERANCE


@dataclass
class CompletionForecast:
    event_tag_counter: int = 0
    latest_tag: int = 0
    forecast_time: Optional[float] = None

    def issue(self) -> int:
        self.event_tag_counter += 1
        self.latest_tag = self.event_tag_counter
        return self.latest_tag


def pe_share_allocation(duration: float, n_gridlets_in_exec: int, n_pes: int,
                        mips_per_pe: float) -> ShareTable:
    """MI each executing gridlet receives over `duration` on a time-shared machine."""
    if n_pes is None or n_pes <= 0:
        raise InvalidResource(f"Share allocation needs at least one PE, got {n_pes}")
    if n_gridlets_in_exec < 1:
        raise NoWork("Share allocation needs at least one executing gridlet")
    if duration < 0:
        raise InvalidDelay(f"Negative share interval {duration}")

    total_mi_per_pe = mips_per_pe * duration
    if n_gridlets_in_exec <= n_pes:
        return ShareTable(total_mi_per_pe, total_mi_per_pe, n_gridlets_in_exec)

    per_pe, leftover = divmod(n_gridlets_in_exec, n_pes)
    return ShareTable(
        max_share_mi=total_mi_per_pe / per_pe,
        min_share_mi=total_mi_per_pe / (per_pe + 1),
        n_max_share_gridlets=(n_pes - leftover) * per_pe,
    )


def share_order(exec_set: Iterable[ResidentGridlet]) -> List[ResidentGridlet]:
    # smallest remaining first, then arrival order
    return sorted(exec_set, key=lambda rg: (rg.remaining_mi, rg.arrival_seq))


def forecast_next_completion(exec_set: Iterable[ResidentGridlet], n_pes: int,
                             mips_per_pe: float, clock: float = 0.0) -> float:
    ordered = share_order(exec_set)
    if not ordered:
        raise NoWork("No executing gridlet to forecast")
    table = pe_share_allocation(1.0, len(ordered), n_pes, mips_per_pe)
    return clock + ordered[0].remaining_mi / table.max_share_mi
