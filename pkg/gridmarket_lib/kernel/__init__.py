from .engine import Engine, SimulationReport
from .entity import Entity, EntityId, EntityState
from .events import Event, EventKind, FutureEventQueue
