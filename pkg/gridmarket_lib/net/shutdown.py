from typing import List, Optional

from ..options import SimulationOptions
from ..utils import DEFAULT_BAUD_RATE, get_logger
from .network import NetEntity
from .tags import Tags

logger = get_logger(__name__)


class ShutdownCoordinator(NetEntity):
    """
    Waits for END_OF_SIMULATION from every user, lets the report writer
    collect its statistics, then tells the core entities to stop.
    """

    def __init__(self, name: str = "Shutdown", user_count: int = 0,
                 baud_rate: float = DEFAULT_BAUD_RATE,
                 options: Optional[SimulationOptions] = None):
        if user_count < 0:
            raise ValueError(f"user_count must be non-negative, got {user_count}")
        super().__init__(name, baud_rate, options)
        self.user_count = user_count
        self.report_writer: Optional[int] = None
        self.targets: List[int] = []
        self.fired_at: Optional[float] = None

    def body(self):
        yield from self.coordinate_shutdown()

    def coordinate_shutdown(self):
        remaining = self.user_count
        while remaining > 0:
            yield self.wait_for_event(lambda e: e.tag == Tags.END_OF_SIMULATION)
            remaining -= 1

        if self.report_writer is not None:
            self.schedule(self.report_writer, 0.0, Tags.END_OF_SIMULATION)
            writer = self.report_writer
            yield self.wait_for_event(
                lambda e: e.tag == Tags.END_OF_SIMULATION and e.source == writer)

        self.fired_at = self.clock
        logger.info("shutdown at %s, stopping %d entities", self.clock, len(self.targets))
        for target in self.targets:
            self.schedule(target, 0.0, Tags.END_OF_SIMULATION)
