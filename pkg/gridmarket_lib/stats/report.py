from typing import Dict, Iterable, List, Optional, Union

import pandas as pd

from ..errors import ProtocolError, ReportIoError
from ..net import NetEntity, Tags
from ..options import SimulationOptions
from ..utils import DEFAULT_BAUD_RATE, get_logger
from .accumulator import AccumulatorSummary
from .statistics import REPORT_COLUMNS, StatisticsStore, StatRecord, matches_any

logger = get_logger(__name__)


class ReportWriter(NetEntity):
    """
    Pulls the records and summaries for its categories when the shutdown
    coordinator signals the end of all users, then acknowledges.
    """

    def __init__(self, categories: Iterable[str], name: str = "ReportWriter",
                 stats: Optional[int] = None, baud_rate: float = DEFAULT_BAUD_RATE,
                 options: Optional[SimulationOptions] = None):
        super().__init__(name, baud_rate, options)
        self.categories = list(categories)
        self.stats = stats
        self.records: List[StatRecord] = []
        self.summaries: Dict[str, Optional[AccumulatorSummary]] = {}

    def body(self):
        signal = yield self.wait_for_event(lambda e: e.tag == Tags.END_OF_SIMULATION)
        if self.stats is not None:
            self.send_control(self.stats, Tags.RETURN_STAT_LIST, self.categories)
            reply = yield self.wait_for_event(lambda e: e.tag == Tags.RETURN_STAT_LIST)
            self.records = list(reply.payload)
            self.send_control(self.stats, Tags.RETURN_ACC_STATISTICS_BY_CATEGORY, self.categories)
            reply = yield self.wait_for_event(
                lambda e: e.tag == Tags.RETURN_ACC_STATISTICS_BY_CATEGORY)
            self.summaries = dict(reply.payload)
        logger.debug("%s collected %d records", self.name, len(self.records))
        self.send_control(signal.source, Tags.END_OF_SIMULATION)


def report_frame(stats: Union[StatisticsStore, Iterable[StatRecord]],
                 categories: Optional[Iterable[str]] = None) -> pd.DataFrame:
    records = stats.records if isinstance(stats, StatisticsStore) else list(stats)
    categories = None if categories is None else list(categories)
    rows = []
    for rec in records:
        if not isinstance(rec, StatRecord):
            raise ProtocolError(f"Not a statistics record: {rec!r}")
        if matches_any(categories, rec.category):
            rows.append({"time": rec.time, "entity": rec.entity.name,
                         "category": rec.category, "value": rec.value})
    df = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    # stable sort keeps arrival order among equal keys
    return df.sort_values(["time", "entity", "category"], kind="mergesort").reset_index(drop=True)


def write_report(stats: Union[StatisticsStore, Iterable[StatRecord]],
                 categories: Optional[Iterable[str]], path) -> pd.DataFrame:
    """Writes matching records as CSV: time,entity,category,value."""
    df = report_frame(stats, categories)
    try:
        df.to_csv(path, index=False, float_format="%.12g", lineterminator="\n",
                  encoding="utf-8")
    except OSError as e:
        raise ReportIoError(f"Cannot write report to {path}: {e}") from e
    return df
