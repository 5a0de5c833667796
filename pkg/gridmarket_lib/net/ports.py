from dataclasses import dataclass
from enum import Enum

from ..errors import InvalidRate


class PortDirection(Enum):
    INPUT = 1
    OUTPUT = 2


def transfer_delay(size_bytes: int, baud_rate: float) -> float:
    """Time to push size_bytes through a link of baud_rate bits per time unit."""
    if baud_rate is None or baud_rate <= 0:
        raise InvalidRate(f"Baud rate must be positive, got {baud_rate}")
    if size_bytes < 0:
        raise ValueError(f"Message size must be non-negative, got {size_bytes}")
    return 8.0 * size_bytes / baud_rate


@dataclass
class IoPort:
    """
    Buffered channel of an entity. The output port serializes transfers:
    a message starts only once the previous one has left the port.
    """
    owner: int
    direction: PortDirection
    baud_rate: float
    busy_until: float = 0.0
    transfers: int = 0

    def __post_init__(self):
        if self.baud_rate is None or self.baud_rate <= 0:
            raise InvalidRate(f"Baud rate must be positive, got {self.baud_rate}")

    def enqueue(self, now: float, size_bytes: int, link_rate: float) -> float:
        """Reserves the port for one transfer and returns its arrival time."""
        start = max(now, self.busy_until)
        arrival = start + transfer_delay(size_bytes, link_rate)
        self.busy_until = arrival
        self.transfers += 1
        return arrival
