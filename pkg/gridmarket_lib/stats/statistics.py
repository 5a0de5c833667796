from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Union

import pandas as pd

from ..kernel import EntityId
from ..net import NetEntity, Tags
from ..options import SimulationOptions
from ..utils import DEFAULT_BAUD_RATE, get_logger
from .accumulator import Accumulator, AccumulatorSummary

logger = get_logger(__name__)

REPORT_COLUMNS = ["time", "entity", "category", "value"]


@dataclass(frozen=True)
class StatRecord:
    time: float
    entity: EntityId
    category: str
    value: float


def category_matches(pattern: str, category: str) -> bool:
    """'.'-separated segments; '*' matches exactly one segment."""
    wanted = pattern.split(".")
    actual = category.split(".")
    if len(wanted) != len(actual):
        return False
    return all(w == "*" or w == a for w, a in zip(wanted, actual))


def matches_any(patterns: Optional[Iterable[str]], category: str) -> bool:
    if patterns is None:
        return True
    return any(category_matches(p, category) for p in patterns)


class StatisticsStore:
    """Category-tagged records in arrival order."""

    def __init__(self):
        self.records: List[StatRecord] = []

    def record(self, record: StatRecord) -> None:
        self.records.append(record)

    def filter(self, categories: Union[str, Iterable[str], None] = None,
               entity: Union[str, int, None] = None) -> List[StatRecord]:
        if isinstance(categories, str):
            categories = [categories]
        selected = []
        for rec in self.records:
            if not matches_any(categories, rec.category):
                continue
            if entity is not None and entity not in (rec.entity.id, rec.entity.name):
                continue
            selected.append(rec)
        return selected

    def accumulate(self, pattern: str) -> Accumulator:
        acc = Accumulator()
        for rec in self.filter(pattern):
            acc.add(rec.value)
        return acc

    def summaries(self, patterns: Iterable[str]) -> Dict[str, Optional[AccumulatorSummary]]:
        result = {}
        for pattern in patterns:
            acc = self.accumulate(pattern)
            result[pattern] = acc.query() if acc.count else None
        return result

    def to_frame(self, categories: Union[str, Iterable[str], None] = None) -> pd.DataFrame:
        rows = [{"time": r.time, "entity": r.entity.name, "category": r.category, "value": r.value}
                for r in self.filter(categories)]
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)

    def __len__(self):
        return len(self.records)


class StatisticsEntity(NetEntity):
    """Collects records from every entity and answers list/summary queries."""

    def __init__(self, name: str = "GridStatistics", baud_rate: float = DEFAULT_BAUD_RATE,
                 options: Optional[SimulationOptions] = None):
        super().__init__(name, baud_rate, options)
        self.store = StatisticsStore()

    def record_stat(self, record: StatRecord) -> None:
        self.store.record(record)

    def body(self):
        while True:
            ev = yield self.wait_for_event()
            if ev.tag == Tags.END_OF_SIMULATION:
                return
            if ev.tag == Tags.RECORD_STATISTICS:
                self.record_stat(ev.payload)
            elif ev.tag == Tags.RETURN_STAT_LIST:
                self.send_control(ev.source, Tags.RETURN_STAT_LIST, self.store.filter(ev.payload))
            elif ev.tag == Tags.RETURN_ACC_STATISTICS_BY_CATEGORY:
                self.send_control(ev.source, Tags.RETURN_ACC_STATISTICS_BY_CATEGORY,
                                  self.store.summaries(ev.payload or []))
            else:
                logger.warning("%s ignored event with tag %s from %s", self.name, ev.tag, ev.source)


def send_stat(sender: NetEntity, stats: Optional[int], category: str, value: float) -> None:
    """Records `value` under `category`, stamped with the sender's clock."""
    if stats is None:
        return
    record = StatRecord(sender.clock, sender.identity, category, float(value))
    sender.send_control(stats, Tags.RECORD_STATISTICS, record)
