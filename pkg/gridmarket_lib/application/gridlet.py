from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional

from ..errors import ProtocolError


class GridletStatus(Enum):
    CREATED = "created"
    SUBMITTED = "submitted"
    QUEUED = "queued"
    INEXEC = "inexec"
    SUCCESS = "success"
    CANCELED = "canceled"


@dataclass
class Gridlet:
    """A job package: processing requirement plus its timing and cost records."""
    id: int
    length_mi: float
    input_size_bytes: int = 0
    output_size_bytes: int = 0
    owner: Optional[int] = None
    status: GridletStatus = GridletStatus.CREATED
    submission_time: Optional[float] = None
    arrival_time: Optional[float] = None
    exec_start_time: Optional[float] = None
    finish_time: Optional[float] = None
    wall_clock: float = 0.0
    cpu_time: float = 0.0
    processing_cost: float = 0.0
    resource_id: Optional[int] = None

    def __post_init__(self):
        if self.length_mi is None or self.length_mi <= 0:
            raise ValueError(f"Gridlet {self.id}: length must be positive, got {self.length_mi}")
        if self.input_size_bytes < 0 or self.output_size_bytes < 0:
            raise ValueError(f"Gridlet {self.id}: I/O sizes must be non-negative")

    @property
    def is_finished(self) -> bool:
        return self.status is GridletStatus.SUCCESS

    @property
    def elapsed(self) -> Optional[float]:
        """Finish minus arrival at the resource."""
        if self.finish_time is None or self.arrival_time is None:
            return None
        return self.finish_time - self.arrival_time


@dataclass
class GridletBatch:
    gridlets: List[Gridlet] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for gl in self.gridlets:
            if gl.id in seen:
                raise ValueError(f"Duplicate gridlet id {gl.id} in batch")
            seen.add(gl.id)

    def __iter__(self) -> Iterator[Gridlet]:
        return iter(self.gridlets)

    def __len__(self):
        return len(self.gridlets)

    def __getitem__(self, index) -> Gridlet:
        return self.gridlets[index]

    def by_id(self) -> Dict[int, Gridlet]:
        return {gl.id: gl for gl in self.gridlets}

    def get(self, gridlet_id: int) -> Gridlet:
        for gl in self.gridlets:
            if gl.id == gridlet_id:
                return gl
        raise ProtocolError(f"Unknown gridlet id {gridlet_id}")

    @property
    def total_mi(self) -> float:
        return sum(gl.length_mi for gl in self.gridlets)

    def unfinished(self) -> List[Gridlet]:
        return [gl for gl in self.gridlets if not gl.is_finished]

    def finished(self) -> List[Gridlet]:
        return [gl for gl in self.gridlets if gl.is_finished]
