from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterator, List, NamedTuple, Optional

from ..errors import InvalidDelay, ProtocolError
from .events import Event

Predicate = Callable[[Event], bool]


class EntityId(NamedTuple):
    id: int
    name: str


class EntityState(Enum):
    RUNNABLE = 1
    WAITING = 2
    HOLDING = 3
    FINISHED = 4


# ---------- COMMANDS ----------
# An entity body is a generator; it yields one of these to block.

@dataclass(frozen=True)
class Hold:
    duration: float


@dataclass(frozen=True)
class WaitFor:
    predicate: Optional[Predicate] = None
    timeout: Optional[float] = None


# ---------- ENTITY ----------

class Entity:
    """
    A simulation process. Subclasses implement `body()` as a generator:

        ev = yield self.wait_for_event()
        yield self.hold(5.0)

    Sending (`schedule`) never blocks; only holds and waits do.
    """

    def __init__(self, name: str):
        self.name = name
        self.id: Optional[int] = None
        self.state = EntityState.RUNNABLE
        self.inbox: deque = deque()
        self.resumptions = 0
        self._engine = None
        self._process: Optional[Iterator] = None
        self._waiting_for: Optional[Predicate] = None
        self._wake_token: Optional[int] = None

    def body(self):
        return None

    def on_registered(self):
        """Called by the engine once the entity has its id."""

    # ---------- PROPERTIES ----------

    @property
    def identity(self) -> EntityId:
        return EntityId(self.id, self.name)

    @property
    def engine(self):
        if self._engine is None:
            raise ProtocolError(f"Entity '{self.name}' is not registered with an engine")
        return self._engine

    @property
    def clock(self) -> float:
        return self.engine.clock

    # ---------- PRIMITIVES ----------

    def schedule(self, destination: int, delay: float, tag: int, payload: Any = None) -> Event:
        return self.engine.schedule(self.id, destination, delay, tag, payload)

    def hold(self, duration: float) -> Hold:
        if duration < 0:
            raise InvalidDelay(f"Negative hold duration {duration} for '{self.name}'")
        return Hold(float(duration))

    def wait_for_event(self, predicate: Optional[Predicate] = None,
                       timeout: Optional[float] = None) -> WaitFor:
        if timeout is not None and timeout < 0:
            raise InvalidDelay(f"Negative wait timeout {timeout} for '{self.name}'")
        return WaitFor(predicate, None if timeout is None else float(timeout))

    def poll_events(self, predicate: Optional[Predicate] = None) -> List[Event]:
        """Removes and returns every deferred event matching predicate, in arrival order."""
        taken, kept = [], deque()
        for event in self.inbox:
            (taken if predicate is None or predicate(event) else kept).append(event)
        self.inbox = kept
        return taken

    def take_first(self, predicate: Optional[Predicate] = None) -> Optional[Event]:
        for index, event in enumerate(self.inbox):
            if predicate is None or predicate(event):
                del self.inbox[index]
                return event
        return None

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, id={self.id})"
