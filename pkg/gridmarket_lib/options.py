import datetime
from dataclasses import asdict, dataclass, field

from .utils import CALENDAR_EPOCH, MAX_GRIDLET_PER_PE, MAX_RESUMPTIONS, STANDARD_PE_MIPS


@dataclass
class SimulationOptions:
    """Engine-wide switches shared by every entity of one simulation."""
    gis_bypass_network: bool = False
    return_uses_output_size: bool = True
    max_gridlet_per_pe: int = MAX_GRIDLET_PER_PE
    max_resumptions: int = MAX_RESUMPTIONS
    control_message_bytes: int = 0
    standard_pe_mips: float = STANDARD_PE_MIPS
    calendar_epoch: datetime.datetime = field(default_factory=lambda: CALENDAR_EPOCH)
    trace: bool = False

    def to_dict(self) -> dict:
        data = asdict(self)
        data["calendar_epoch"] = self.calendar_epoch.isoformat()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SimulationOptions":
        data = dict(data)
        if isinstance(data.get("calendar_epoch"), str):
            data["calendar_epoch"] = datetime.datetime.fromisoformat(data["calendar_epoch"])
        return cls(**data)
