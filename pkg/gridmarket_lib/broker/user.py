from dataclasses import dataclass
from typing import List, Optional, Sequence

from ..application import Gridlet, GridletBatch, GridletStatus
from ..errors import ProtocolError
from ..net import NetEntity, Tags
from ..options import SimulationOptions
from ..stats import send_stat
from ..utils import ENTITY_BAUD_RATE, get_logger
from .experiment import Experiment

logger = get_logger(__name__)


@dataclass
class Release:
    """A gridlet a direct-mode user submits at `release_time` after its start."""
    gridlet: Gridlet
    release_time: float = 0.0


class UserEntity(NetEntity):
    """
    A grid user. With a broker it hands over an experiment and waits for the
    result; in direct mode it submits gridlets itself to one resource.
    Either way it signals the shutdown coordinator when done.
    """

    def __init__(self, name: str, experiment: Optional[Experiment] = None,
                 broker: Optional[int] = None, target: Optional[int] = None,
                 releases: Sequence[Release] = (), start_delay: float = 0.0,
                 stats: Optional[int] = None, shutdown: Optional[int] = None,
                 baud_rate: float = ENTITY_BAUD_RATE,
                 options: Optional[SimulationOptions] = None):
        super().__init__(name, baud_rate, options)
        if (broker is None) == (target is None):
            raise ValueError(f"User '{name}' needs exactly one of a broker or a direct target")
        if start_delay < 0:
            raise ValueError(f"User '{name}': start delay must be non-negative")
        self.experiment = experiment
        self.broker = broker
        self.target = target
        self.releases = sorted(releases, key=lambda r: r.release_time)
        self.start_delay = float(start_delay)
        self.stats = stats
        self.shutdown = shutdown
        self.result: Optional[Experiment] = None
        self.returned: List[Gridlet] = []

    @property
    def batch(self) -> GridletBatch:
        if self.experiment is not None:
            return self.experiment.gridlets
        return GridletBatch([r.gridlet for r in self.releases])

    def body(self):
        if self.start_delay > 0:
            yield self.hold(self.start_delay)
        if self.broker is not None:
            yield from self._run_with_broker()
        else:
            yield from self._run_direct()
        if self.shutdown is not None:
            self.send_control(self.shutdown, Tags.END_OF_SIMULATION)

    def _run_with_broker(self):
        self.send_control(self.broker, Tags.EXPERIMENT, self.experiment)
        ev = yield self.wait_for_event(lambda e: e.tag == Tags.EXPERIMENT)
        self.result = ev.payload
        logger.debug("%s got experiment back: %s", self.name, self.result.status.value)

    def _run_direct(self):
        start = self.clock
        for release in self.releases:
            wait = start + release.release_time - self.clock
            if wait > 0:
                yield self.hold(wait)
            gl = release.gridlet
            gl.owner = self.id
            gl.status = GridletStatus.SUBMITTED
            gl.submission_time = self.clock
            self.send(self.target, Tags.GRIDLET_SUBMIT, gl, gl.input_size_bytes)

        while len(self.returned) < len(self.releases):
            ev = yield self.wait_for_event(lambda e: e.tag == Tags.GRIDLET_RETURN)
            self._receive(ev.payload)

    def _receive(self, gl: Gridlet) -> None:
        if not isinstance(gl, Gridlet) or gl.owner != self.id:
            raise ProtocolError(f"{self.name}: unexpected gridlet return {gl!r}")
        if any(done.id == gl.id for done in self.returned):
            raise ProtocolError(f"{self.name}: gridlet {gl.id} returned twice")
        gl.status = GridletStatus.SUCCESS
        self.returned.append(gl)
        send_stat(self, self.stats, f"{self.name}.GRIDLET.FinishTime", gl.finish_time)
        send_stat(self, self.stats, f"{self.name}.GRIDLET.Elapsed", gl.elapsed)
