from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

from ..application import GridletBatch
from ..errors import InvalidFactor


class OptimizationPolicy(Enum):
    COST_OPT = "cost"


class ExperimentStatus(Enum):
    CREATED = "created"
    RUNNING = "running"
    COMPLETED = "completed"
    DEADLINE_EXHAUSTED = "deadline_exhausted"
    BUDGET_EXHAUSTED = "budget_exhausted"
    NO_RESOURCES = "no_resources"
    INFEASIBLE = "infeasible_deadline"


@dataclass
class ResourceUsage:
    completed: int = 0
    spent: float = 0.0


@dataclass
class Experiment:
    """
    A user's job batch plus its constraints. Either both factors or both
    absolute values are given; absolute deadlines count from the start.
    """
    gridlets: GridletBatch
    policy: OptimizationPolicy = OptimizationPolicy.COST_OPT
    d_factor: Optional[float] = None
    b_factor: Optional[float] = None
    deadline: Optional[float] = None
    budget: Optional[float] = None
    start_time: Optional[float] = None
    end_time: Optional[float] = None
    status: ExperimentStatus = ExperimentStatus.CREATED
    deadline_time: Optional[float] = None
    expenses: float = 0.0
    usage: Dict[str, ResourceUsage] = field(default_factory=dict)

    def __post_init__(self):
        has_factors = self.d_factor is not None or self.b_factor is not None
        has_absolutes = self.deadline is not None or self.budget is not None
        if has_factors == has_absolutes:
            raise InvalidFactor("Give either d_factor/b_factor or deadline/budget, not both")
        if has_factors:
            if self.d_factor is None or self.b_factor is None:
                raise InvalidFactor("Both d_factor and b_factor are required")
            if self.d_factor < 0 or self.b_factor < 0:
                raise InvalidFactor(
                    f"Factors must be non-negative, got D={self.d_factor}, B={self.b_factor}")
        else:
            if self.deadline is None or self.budget is None:
                raise InvalidFactor("Both deadline and budget are required")
            if self.deadline <= 0:
                raise InvalidFactor(f"Deadline must be positive, got {self.deadline}")
            if self.budget < 0:
                raise InvalidFactor(f"Budget must be non-negative, got {self.budget}")

    @property
    def uses_factors(self) -> bool:
        return self.d_factor is not None

    @property
    def completed(self) -> int:
        return len(self.gridlets.finished())

    @property
    def completion_factor(self) -> float:
        return self.completed / len(self.gridlets) if len(self.gridlets) else 1.0

    @property
    def time_utilization(self) -> float:
        if self.end_time is None or self.start_time is None or not self.deadline:
            return 0.0
        return (self.end_time - self.start_time) / self.deadline

    @property
    def budget_utilization(self) -> float:
        if not self.budget:
            return 0.0
        return self.expenses / self.budget
