from typing import List, Optional

from ..utils import DEFAULT_SEED
from .config import ResourceSpec, ScenarioConfig, SweepSpec, UserSpec

# name, architecture, os, PEs, MIPS per PE, policy, G$ per PE time unit, time zone
WWG_TESTBED = [
    ("R0", "Compaq AlphaServer", "OSF1", 4, 515, "time_shared", 8, 10.0),
    ("R1", "Sun Ultra", "Solaris", 4, 377, "time_shared", 4, 9.0),
    ("R2", "Sun Ultra", "Solaris", 4, 377, "time_shared", 3, 9.0),
    ("R3", "Sun Ultra", "Solaris", 2, 377, "time_shared", 3, 9.0),
    ("R4", "Intel Pentium/VC820", "Linux", 2, 380, "time_shared", 2, 1.0),
    ("R5", "SGI Origin 3200", "IRIX", 6, 410, "time_shared", 5, 1.0),
    ("R6", "SGI Origin 3200", "IRIX", 16, 410, "time_shared", 5, 1.0),
    ("R7", "SGI Origin 3200", "IRIX", 16, 410, "space_shared", 4, 1.0),
    ("R8", "Intel Pentium/VC820", "Linux", 2, 380, "time_shared", 1, 0.0),
    ("R9", "SGI Origin 3200", "IRIX", 4, 410, "time_shared", 6, 0.0),
    ("R10", "Sun Ultra", "Solaris", 8, 377, "time_shared", 3, -6.0),
]

DEADLINE_GRID = list(range(100, 3601, 500))
BUDGET_GRID = list(range(5000, 22001, 1000))
USER_COUNT_GRID = [1] + list(range(10, 101, 10))


def wwg_resources() -> List[ResourceSpec]:
    return [
        ResourceSpec(name=name, pe_mips=mips, n_machines=1, pes_per_machine=pes, policy=policy,
                     price_per_pe_time_unit=price, time_zone=tz, architecture=arch, os=os_name)
        for name, arch, os_name, pes, mips, policy, price, tz in WWG_TESTBED
    ]


def preset_wwg(deadline: float = 3100, budget: float = 22000, n_gridlets: int = 200,
               seed: int = DEFAULT_SEED, sweep: Optional[SweepSpec] = None) -> ScenarioConfig:
    """The eleven-resource testbed with one cost-optimising user."""
    user = UserSpec(name="U0", policy="cost", n_gridlets=n_gridlets, base_time_units=100.0,
                    variation=0.1, deadline=deadline, budget=budget)
    return ScenarioConfig(resources=wwg_resources(), users=[user], seed=seed, sweep=sweep)


def preset_wwg_sweep(seed: int = DEFAULT_SEED,
                     user_counts: Optional[List[int]] = None) -> ScenarioConfig:
    """Deadline 100..3600 by 500 against budget 5000..22000 by 1000."""
    sweep = SweepSpec(deadline_values=list(DEADLINE_GRID), budget_values=list(BUDGET_GRID),
                      user_counts=user_counts)
    return preset_wwg(seed=seed, sweep=sweep)


PRESETS = {
    "wwg": preset_wwg,
    "wwg-sweep": preset_wwg_sweep,
}
