from gridmarket_lib.application import Gridlet
from gridmarket_lib.broker import Release
from gridmarket_lib.core import MarketSimulation
from gridmarket_lib.kernel import Entity
from gridmarket_lib.net import NetEntity
from gridmarket_lib.resource import Machine, ResourceCharacteristics

GOLDEN_LENGTHS = (10.0, 8.5, 9.5)
GOLDEN_ARRIVALS = (0.0, 4.0, 7.0)


class Scripted(Entity):
    """Entity whose body is supplied as a generator function of the entity."""

    def __init__(self, name, script=None):
        super().__init__(name)
        self.script = script
        self.log = []

    def body(self):
        if self.script is None:
            return None
        return self.script(self)


class ScriptedNet(NetEntity):
    def __init__(self, name, script=None, baud_rate=9600.0, options=None):
        super().__init__(name, baud_rate, options)
        self.script = script
        self.log = []

    def body(self):
        if self.script is None:
            return None
        return self.script(self)


def record_forever(entity):
    """Script: log (clock, tag, seq) for every delivered event."""
    while True:
        ev = yield entity.wait_for_event()
        entity.log.append((entity.clock, ev.tag, ev.seq))


def single_machine(n_pes, mips, policy="time_shared", price=0.0):
    return ResourceCharacteristics("test-arch", "test-os", [Machine.homogeneous(0, n_pes, mips)],
                                   policy, 0.0, price)


def direct_run(policy, lengths=GOLDEN_LENGTHS, arrivals=GOLDEN_ARRIVALS, n_pes=2, mips=1.0,
               calendar=None, report_categories=None):
    """One resource, one direct user releasing `lengths` at `arrivals`."""
    sim = MarketSimulation(report_categories=report_categories)
    resource = sim.add_resource("R0", single_machine(n_pes, mips, policy), calendar)
    releases = [Release(Gridlet(i, length), at)
                for i, (length, at) in enumerate(zip(lengths, arrivals))]
    user = sim.add_direct_user("U0", "R0", releases)
    sim.run()
    gridlets = sorted((r.gridlet for r in user.releases), key=lambda gl: gl.id)
    return sim, resource, gridlets
