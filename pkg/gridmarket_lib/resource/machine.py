from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from ..errors import InvalidResource


class PEStatus(Enum):
    FREE = "free"
    BUSY = "busy"


class AllocationPolicy(Enum):
    TIME_SHARED = "time_shared"
    SPACE_SHARED = "space_shared"

    @classmethod
    def parse(cls, value) -> "AllocationPolicy":
        if isinstance(value, cls):
            return value
        normalized = str(value).strip().lower().replace("-", "_")
        for policy in cls:
            if policy.value == normalized:
                return policy
        raise InvalidResource(f"Unknown allocation policy '{value}'")


@dataclass
class ProcessingElement:
    id: int
    mips_rating: float
    status: PEStatus = PEStatus.FREE

    def __post_init__(self):
        if self.mips_rating is None or self.mips_rating <= 0:
            raise InvalidResource(f"PE {self.id}: MIPS rating must be positive, got {self.mips_rating}")


@dataclass
class Machine:
    id: int
    pes: List[ProcessingElement] = field(default_factory=list)

    def __post_init__(self):
        if not self.pes:
            raise InvalidResource(f"Machine {self.id} needs at least one PE")

    def free_pe(self) -> Optional[ProcessingElement]:
        return next((pe for pe in self.pes if pe.status is PEStatus.FREE), None)

    @classmethod
    def homogeneous(cls, machine_id: int, n_pes: int, mips: float) -> "Machine":
        return cls(machine_id, [ProcessingElement(i, mips) for i in range(n_pes)])


@dataclass
class ResourceCharacteristics:
    """Static description a resource reports to brokers."""
    architecture: str
    os: str
    machines: List[Machine]
    policy: AllocationPolicy
    time_zone: float = 0.0
    cost_per_pe_time_unit: float = 0.0

    def __post_init__(self):
        self.policy = AllocationPolicy.parse(self.policy)
        if not self.machines:
            raise InvalidResource("A resource needs at least one machine")
        if self.cost_per_pe_time_unit < 0:
            raise InvalidResource(f"Cost must be non-negative, got {self.cost_per_pe_time_unit}")
        if self.policy is AllocationPolicy.TIME_SHARED and len(self.machines) != 1:
            raise InvalidResource("A time-shared resource is a single machine")

    # ---------- PROPERTIES ----------

    @property
    def pes(self) -> List[Tuple[Machine, ProcessingElement]]:
        return [(m, pe) for m in self.machines for pe in m.pes]

    @property
    def n_pes(self) -> int:
        return sum(len(m.pes) for m in self.machines)

    @property
    def pe_mips(self) -> float:
        """Rating of the first PE; PEs of one resource are assumed alike."""
        return self.machines[0].pes[0].mips_rating

    @property
    def total_mips(self) -> float:
        return sum(pe.mips_rating for _, pe in self.pes)

    @property
    def cost_per_mi(self) -> float:
        return self.cost_per_pe_time_unit / self.pe_mips

    @property
    def mips_per_g(self) -> float:
        if self.cost_per_pe_time_unit == 0:
            return float("inf")
        return self.pe_mips / self.cost_per_pe_time_unit
