from typing import Any, Optional

from ..kernel import Entity, Event
from ..options import SimulationOptions
from ..utils import DEFAULT_BAUD_RATE
from .ports import IoPort, PortDirection


class NetEntity(Entity):
    """Entity that talks to others through its Input and Output ports."""

    def __init__(self, name: str, baud_rate: float = DEFAULT_BAUD_RATE,
                 options: Optional[SimulationOptions] = None):
        super().__init__(name)
        self.baud_rate = float(baud_rate)
        self.options = options or SimulationOptions()
        self.input = IoPort(-1, PortDirection.INPUT, self.baud_rate)
        self.output = IoPort(-1, PortDirection.OUTPUT, self.baud_rate)

    def send(self, destination: int, tag: int, payload: Any = None,
             size_bytes: int = 0, bypass_network: bool = False) -> Event:
        """Sends via the output port; arrival is delayed by the link transfer time."""
        target = self.engine.entity(destination)
        if bypass_network:
            return self.schedule(target.id, 0.0, tag, payload)
        link_rate = self.output.baud_rate
        if isinstance(target, NetEntity):
            link_rate = min(link_rate, target.input.baud_rate)
            target.input.transfers += 1
        now = self.clock
        arrival = self.output.enqueue(now, size_bytes, link_rate)
        return self.schedule(target.id, arrival - now, tag, payload)

    def send_control(self, destination: int, tag: int, payload: Any = None,
                     bypass_network: bool = False) -> Event:
        return self.send(destination, tag, payload, self.options.control_message_bytes,
                         bypass_network)

    def on_registered(self):
        self.input.owner = self.id
        self.output.owner = self.id
