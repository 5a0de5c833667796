import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional

from ..options import SimulationOptions
from ..utils import DEFAULT_BAUD_RATE, get_logger
from .network import NetEntity
from .tags import Tags

logger = get_logger(__name__)


@dataclass
class DirectoryRecord:
    resource: int
    registration_time: float
    order: int = 0


class GridInformationService(NetEntity):
    """Directory of registered resources; answers discovery queries."""

    def __init__(self, name: str = "GIS", baud_rate: float = DEFAULT_BAUD_RATE,
                 options: Optional[SimulationOptions] = None):
        super().__init__(name, baud_rate, options)
        self._records: Dict[int, DirectoryRecord] = {}
        self._order = itertools.count()

    def register_resource(self, resource: int) -> DirectoryRecord:
        """Stores (or refreshes) the record of a resource."""
        self.engine.entity(resource)
        record = DirectoryRecord(resource, self.clock, next(self._order))
        self._records[resource] = record
        return record

    def query_resource_list(self, requester: Optional[int] = None) -> List[int]:
        """Registered resource ids, ordered by registration time."""
        ordered = sorted(self._records.values(), key=lambda r: (r.registration_time, r.order))
        return [r.resource for r in ordered]

    @property
    def records(self) -> List[DirectoryRecord]:
        return list(self._records.values())

    def body(self):
        while True:
            ev = yield self.wait_for_event()
            if ev.tag == Tags.END_OF_SIMULATION:
                return
            if ev.tag == Tags.REGISTER_RESOURCE:
                self.register_resource(ev.payload if ev.payload is not None else ev.source)
            elif ev.tag == Tags.RESOURCE_LIST:
                self.send_control(ev.source, Tags.RESOURCE_LIST,
                                  self.query_resource_list(ev.source),
                                  bypass_network=self.options.gis_bypass_network)
            else:
                logger.warning("%s ignored event with tag %s from %s", self.name, ev.tag, ev.source)
