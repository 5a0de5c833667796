from .accumulator import Accumulator, AccumulatorSummary
from .report import ReportWriter, report_frame, write_report
from .statistics import (StatisticsEntity, StatisticsStore, StatRecord, category_matches,
                         matches_any, send_stat)
