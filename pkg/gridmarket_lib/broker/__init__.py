from .broker import Broker
from .experiment import Experiment, ExperimentStatus, OptimizationPolicy, ResourceUsage
from .planning import (BrokerResourceRecord, SchedulePlan, compute_budget, compute_deadline,
                       cost_per_mi, dispatch_count, max_makespan, min_makespan, rank_by_cost,
                       schedule_advisor)
from .user import Release, UserEntity
