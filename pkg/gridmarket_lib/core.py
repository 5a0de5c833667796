# ---------- IMPORTS ----------

from typing import Iterable, List, Optional, Sequence

import pandas as pd

from .broker import Broker, Experiment, Release, UserEntity
from .kernel import Engine, SimulationReport
from .net import GridInformationService, ShutdownCoordinator
from .options import SimulationOptions
from .resource import GridResource, ResourceCalendar, ResourceCharacteristics
from .stats import ReportWriter, StatisticsEntity, StatisticsStore, write_report
from .utils import ENTITY_BAUD_RATE

# ---------- MAIN CLASS ----------

class MarketSimulation:
    """
    One simulated grid: an engine with its directory, statistics and
    shutdown entities, plus whatever resources and users are added.
    """

    def __init__(self, options: Optional[SimulationOptions] = None,
                 report_categories: Optional[Iterable[str]] = None):
        self.options = options or SimulationOptions()
        self.engine = Engine(self.options.max_resumptions, self.options.trace)

        self.gis = GridInformationService(options=self.options)
        self.stats = StatisticsEntity(options=self.options)
        self.shutdown = ShutdownCoordinator(options=self.options)
        for entity in (self.gis, self.stats, self.shutdown):
            self.engine.register(entity)

        self.report_writer: Optional[ReportWriter] = None
        if report_categories is not None:
            self.report_writer = ReportWriter(report_categories, stats=self.stats.id,
                                              options=self.options)
            self.engine.register(self.report_writer)

        self.resources: List[GridResource] = []
        self.users: List[UserEntity] = []
        self.brokers: List[Broker] = []
        self.report: Optional[SimulationReport] = None

    def add_resource(self, name: str, characteristics: ResourceCharacteristics,
                     calendar: Optional[ResourceCalendar] = None,
                     baud_rate: float = ENTITY_BAUD_RATE) -> GridResource:
        resource = GridResource(name, characteristics, calendar, baud_rate, self.options,
                                gis=self.gis.id)
        self.engine.register(resource)
        self.resources.append(resource)
        return resource

    def add_user(self, name: str, experiment: Experiment, start_delay: float = 0.0,
                 baud_rate: float = ENTITY_BAUD_RATE) -> UserEntity:
        """Adds a user together with the broker that runs its experiment."""
        broker = Broker(f"Broker_{name}", name, gis=self.gis.id, stats=self.stats.id,
                        baud_rate=baud_rate, options=self.options)
        self.engine.register(broker)
        self.brokers.append(broker)
        user = UserEntity(name, experiment, broker=broker.id, start_delay=start_delay,
                          stats=self.stats.id, shutdown=self.shutdown.id,
                          baud_rate=baud_rate, options=self.options)
        self.engine.register(user)
        self.users.append(user)
        return user

    def add_direct_user(self, name: str, target: str, releases: Sequence[Release],
                        start_delay: float = 0.0,
                        baud_rate: float = ENTITY_BAUD_RATE) -> UserEntity:
        """Adds a user that submits its gridlets straight to resource `target`."""
        user = UserEntity(name, broker=None, target=self.engine.entity_id(target),
                          releases=releases, start_delay=start_delay, stats=self.stats.id,
                          shutdown=self.shutdown.id, baud_rate=baud_rate, options=self.options)
        self.engine.register(user)
        self.users.append(user)
        return user

    def run(self) -> SimulationReport:
        self.shutdown.user_count = len(self.users)
        self.shutdown.report_writer = self.report_writer.id if self.report_writer else None
        self.shutdown.targets = ([self.gis.id, self.stats.id]
                                 + [r.id for r in self.resources]
                                 + [b.id for b in self.brokers])
        self.report = self.engine.run()
        return self.report

    # ---------- PROPERTIES ----------

    @property
    def statistics(self) -> StatisticsStore:
        return self.stats.store

    @property
    def experiments(self) -> List[Optional[Experiment]]:
        return [u.result if u.broker is not None else None for u in self.users]

    def statistics_frame(self, categories: Optional[Iterable[str]] = None) -> pd.DataFrame:
        return self.statistics.to_frame(categories)

    def write_report(self, path, categories: Optional[Iterable[str]] = None) -> pd.DataFrame:
        """Writes the report writer's records, or the whole store when there is no writer."""
        if self.report_writer is not None:
            return write_report(self.report_writer.records, categories, path)
        return write_report(self.statistics, categories, path)
