import heapq
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, List, Optional


class EventKind(Enum):
    MESSAGE = 1
    WAKE = 2  # engine-private: end of a hold or of a timed wait


@dataclass
class Event:
    """Timestamped message between entities; seq is the global tie-breaker."""
    time: float
    source: int
    destination: int
    tag: int
    seq: int
    payload: Any = None
    kind: EventKind = EventKind.MESSAGE

    def __repr__(self):
        return (f"Event(t={self.time}, seq={self.seq}, {self.source}->{self.destination}, "
                f"tag={self.tag})")


@dataclass
class FutureEventQueue:
    """Events ordered by (time, seq); equal times pop in insertion order."""
    _heap: List = field(default_factory=list)
    _counter: itertools.count = field(default_factory=itertools.count)

    def next_seq(self) -> int:
        return next(self._counter)

    def push(self, event: Event):
        heapq.heappush(self._heap, (event.time, event.seq, event))

    def pop(self) -> Optional[Event]:
        if self._heap:
            return heapq.heappop(self._heap)[2]
        return None

    def peek(self) -> Optional[Event]:
        return self._heap[0][2] if self._heap else None

    def is_empty(self) -> bool:
        return not self._heap

    def __len__(self):
        return len(self._heap)
