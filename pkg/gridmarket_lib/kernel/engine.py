import hashlib
import inspect
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

from ..errors import DuplicateEntity, InvalidDelay, ProtocolError, RunawayEntity, UnknownEntity
from ..utils import MAX_RESUMPTIONS, get_logger
from .entity import Entity, EntityState, Hold, WaitFor
from .events import Event, EventKind, FutureEventQueue

logger = get_logger(__name__)


@dataclass
class SimulationReport:
    final_clock: float
    events_by_entity: Dict[str, int] = field(default_factory=dict)
    pending_events: int = 0
    dropped_events: int = 0
    trace_digest: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "final_clock": self.final_clock,
            "events_by_entity": dict(self.events_by_entity),
            "pending_events": self.pending_events,
            "dropped_events": self.dropped_events,
            "trace_digest": self.trace_digest,
        }


class Engine:
    """
    Sequential process-oriented discrete-event engine.

    Entities run one at a time: the engine pops the earliest event, advances
    the clock and resumes the destination entity until it blocks again.
    """

    def __init__(self, max_resumptions: int = MAX_RESUMPTIONS, trace: bool = False):
        self.max_resumptions = max_resumptions
        self.trace = trace
        self._clock = 0.0
        self._queue = FutureEventQueue()
        self._entities: List[Entity] = []
        self._by_name: Dict[str, Entity] = {}
        self._events_by_entity: Dict[str, int] = {}
        self._dropped = 0
        self._digest = hashlib.sha256()
        self._running = False

    # ---------- REGISTRATION ----------

    def register(self, entity: Entity) -> int:
        if entity.name in self._by_name:
            raise DuplicateEntity(f"Entity name '{entity.name}' is already registered")
        entity.id = len(self._entities)
        entity._engine = self
        self._entities.append(entity)
        self._by_name[entity.name] = entity
        self._events_by_entity[entity.name] = 0
        entity.on_registered()
        logger.debug("registered %s", entity)
        return entity.id

    def entity(self, key: Union[int, str]) -> Entity:
        try:
            if isinstance(key, str):
                return self._by_name[key]
            if key < 0:
                raise IndexError(key)
            return self._entities[key]
        except (KeyError, IndexError, TypeError):
            raise UnknownEntity(f"Unknown entity: {key!r}") from None

    def entity_id(self, name: str) -> int:
        return self.entity(name).id

    @property
    def entities(self) -> List[Entity]:
        return list(self._entities)

    @property
    def clock(self) -> float:
        return self._clock

    # ---------- SCHEDULING ----------

    def schedule(self, source: int, destination: int, delay: float, tag: int,
                 payload: Any = None) -> Event:
        if delay is None or delay < 0:
            raise InvalidDelay(f"Negative delay {delay} (tag {tag})")
        self.entity(destination)
        event = Event(self._clock + delay, source, destination, tag,
                      self._queue.next_seq(), payload)
        self._queue.push(event)
        return event

    def _schedule_wake(self, entity: Entity, delay: float) -> None:
        event = Event(self._clock + delay, entity.id, entity.id, 0,
                      self._queue.next_seq(), None, EventKind.WAKE)
        entity._wake_token = event.seq
        event.payload = event.seq
        self._queue.push(event)

    # ---------- RUN LOOP ----------

    def run(self) -> SimulationReport:
        self._running = True
        try:
            for entity in self._entities:
                self._start(entity)
            while not self._queue.is_empty() and not self._all_finished():
                event = self._queue.pop()
                if event.time < self._clock:
                    raise ProtocolError(f"Clock would move backwards to {event.time}")
                self._clock = event.time
                self._dispatch(event)
        finally:
            self._running = False
            self._finalize()
        report = SimulationReport(
            final_clock=self._clock,
            events_by_entity=dict(self._events_by_entity),
            pending_events=len(self._queue),
            dropped_events=self._dropped,
            trace_digest=self._digest.hexdigest(),
        )
        logger.debug("run finished at %s with %d pending events", self._clock, report.pending_events)
        return report

    def _all_finished(self) -> bool:
        return all(e.state is EntityState.FINISHED for e in self._entities)

    def _start(self, entity: Entity) -> None:
        process = entity.body()
        if not inspect.isgenerator(process):
            entity.state = EntityState.FINISHED
            return
        entity._process = process
        self._resume(entity, None)

    def _dispatch(self, event: Event) -> None:
        entity = self._entities[event.destination]
        if entity.state is EntityState.FINISHED:
            if event.kind is EventKind.MESSAGE:
                self._dropped += 1
            return

        if event.kind is EventKind.WAKE:
            # A wake whose token was superseded is stale
            if entity._wake_token == event.payload:
                entity._wake_token = None
                entity._waiting_for = None
                self._resume(entity, None)
            return

        self._events_by_entity[entity.name] += 1
        self._digest.update(
            f"{event.time!r}|{event.seq}|{event.source}|{event.destination}|{event.tag}\n".encode()
        )
        if self.trace:
            logger.debug("deliver %r", event)

        if entity.state is EntityState.WAITING and (
                entity._waiting_for is None or entity._waiting_for(event)):
            entity._waiting_for = None
            entity._wake_token = None
            self._resume(entity, event)
        else:
            entity.inbox.append(event)

    def _resume(self, entity: Entity, value: Any) -> None:
        while True:
            entity.resumptions += 1
            if entity.resumptions > self.max_resumptions:
                raise RunawayEntity(entity.name, self.max_resumptions)
            entity.state = EntityState.RUNNABLE
            try:
                command = entity._process.send(value)
            except StopIteration:
                entity.state = EntityState.FINISHED
                entity._process = None
                logger.debug("%s finished at %s", entity, self._clock)
                return

            if isinstance(command, Hold):
                entity.state = EntityState.HOLDING
                self._schedule_wake(entity, command.duration)
                return
            if isinstance(command, WaitFor):
                deferred = entity.take_first(command.predicate)
                if deferred is not None:
                    value = deferred
                    continue
                entity.state = EntityState.WAITING
                entity._waiting_for = command.predicate
                if command.timeout is not None:
                    self._schedule_wake(entity, command.timeout)
                else:
                    entity._wake_token = None
                return
            raise ProtocolError(f"{entity} yielded unsupported command {command!r}")

    def _finalize(self) -> None:
        for entity in self._entities:
            if entity.state is not EntityState.FINISHED:
                if entity._process is not None:
                    entity._process.close()
                    entity._process = None
                entity.state = EntityState.FINISHED
