from .core import MarketSimulation
from .errors import GridMarketError
from .options import SimulationOptions

__all__ = ["MarketSimulation", "GridMarketError", "SimulationOptions"]
