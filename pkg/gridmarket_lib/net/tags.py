from enum import IntEnum

from ..utils import DEFAULT_BAUD_RATE


class Tags(IntEnum):
    """Message tags shared by every entity. Values 0..11 and -1 are public API."""
    END_OF_SIMULATION = -1
    INSIGNIFICANT = 0
    EXPERIMENT = 1
    REGISTER_RESOURCE = 2
    RESOURCE_LIST = 3
    RESOURCE_CHARACTERISTICS = 4
    RESOURCE_DYNAMICS = 5
    GRIDLET_SUBMIT = 6
    GRIDLET_RETURN = 7
    GRIDLET_STATUS = 8
    RECORD_STATISTICS = 9
    RETURN_STAT_LIST = 10
    RETURN_ACC_STATISTICS_BY_CATEGORY = 11

    # resource self-addressed events
    INTERNAL_COMPLETION = 101
    LOAD_CHANGE = 102


__all__ = ["Tags", "DEFAULT_BAUD_RATE"]
