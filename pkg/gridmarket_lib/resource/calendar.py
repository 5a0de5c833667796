import datetime
import math
from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Tuple

from ..errors import InvalidLoad
from ..utils import CALENDAR_EPOCH

SECONDS_PER_DAY = 86400.0
SECONDS_PER_HOUR = 3600.0


@dataclass
class ResourceCalendar:
    """
    Local (non-grid) load on a resource as a function of its local time.
    One simulation time unit is one second after `epoch`.
    Weekdays follow `datetime.weekday()`: Monday is 0, Sunday is 6.
    """
    time_zone: float = 0.0
    weekends: FrozenSet[int] = frozenset({5, 6})
    holidays: FrozenSet[datetime.date] = frozenset()
    peak_load: float = 0.0
    off_peak_load: float = 0.0
    holiday_load: float = 0.0
    peak_start_hour: float = 9.0
    peak_end_hour: float = 17.0
    epoch: datetime.datetime = field(default_factory=lambda: CALENDAR_EPOCH)

    def __post_init__(self):
        self.weekends = frozenset(self.weekends)
        self.holidays = frozenset(
            datetime.date.fromisoformat(h) if isinstance(h, str) else h for h in self.holidays)
        for name in ("peak_load", "off_peak_load", "holiday_load"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise InvalidLoad(f"{name} must lie in [0, 1), got {value}")
        if not 0.0 <= self.peak_start_hour <= self.peak_end_hour <= 24.0:
            raise InvalidLoad(
                f"Peak window [{self.peak_start_hour}, {self.peak_end_hour}) is not within a day")

    @property
    def is_flat(self) -> bool:
        return self.peak_load == self.off_peak_load == self.holiday_load

    def _local(self, now: float) -> Tuple[datetime.date, float]:
        start_of_day = (self.epoch.hour * SECONDS_PER_HOUR + self.epoch.minute * 60.0
                        + self.epoch.second)
        local = now + self.time_zone * SECONDS_PER_HOUR + start_of_day
        # boundaries fall on whole seconds; snap rounding residue onto them
        if abs(local - round(local)) < 1e-6:
            local = float(round(local))
        day = math.floor(local / SECONDS_PER_DAY)
        return self.epoch.date() + datetime.timedelta(days=day), local - day * SECONDS_PER_DAY

    def load(self, now: float) -> float:
        date, seconds = self._local(now)
        if date in self.holidays or date.weekday() in self.weekends:
            return self.holiday_load
        hour = seconds / SECONDS_PER_HOUR
        if self.peak_start_hour <= hour < self.peak_end_hour:
            return self.peak_load
        return self.off_peak_load

    def next_change(self, now: float) -> Optional[float]:
        """Next time at which the load regime may switch; None for a flat calendar."""
        if self.is_flat:
            return None
        _, seconds = self._local(now)
        candidates = [self.peak_start_hour * SECONDS_PER_HOUR,
                      self.peak_end_hour * SECONDS_PER_HOUR,
                      SECONDS_PER_DAY]
        boundary = min(c for c in candidates if c > seconds)
        return now + (boundary - seconds)


def effective_mips(rating: float, calendar: Optional[ResourceCalendar], now: float) -> float:
    """Rating left for grid work once the local load is served."""
    if calendar is None:
        return rating
    return rating * (1.0 - calendar.load(now))
