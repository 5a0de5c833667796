import datetime
import logging

# ---------- CONSTANTS ----------

# Network (bits per simulation time unit)
DEFAULT_BAUD_RATE = 9600.0
ENTITY_BAUD_RATE = 28000.0

# Broker staging limit
MAX_GRIDLET_PER_PE = 2

# Rating of the standard PE used to express job lengths
STANDARD_PE_MIPS = 100.0

# Engine guard: resumptions per entity per run
MAX_RESUMPTIONS = 10 ** 7

# Numerical tolerance on remaining MI
MI_TOLERANCE = 1e-9

# Calendar epoch: simulation time 0, one time unit per second (a Monday)
CALENDAR_EPOCH = datetime.datetime(2002, 1, 7)

# Per-user seed derivation used by the multi-user experiments
SEED_MULTIPLIER = 997

# Scenario seed when none is given; non-zero so users get distinct streams
DEFAULT_SEED = 1

# ---------- UTILITY FUNCTIONS ----------

def get_logger(name: str) -> logging.Logger:
    """Module logger; handlers are left to the application."""
    return logging.getLogger(name)


def derive_user_seed(seed: int, user_index: int) -> int:
    """Seed for user i: seed * 997 * (1 + i) + 1."""
    return seed * SEED_MULTIPLIER * (1 + user_index) + 1
