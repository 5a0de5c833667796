import math
from dataclasses import dataclass

from ..errors import EmptyAccumulator


@dataclass(frozen=True)
class AccumulatorSummary:
    mean: float
    sum: float
    std: float
    min: float
    max: float
    count: int


class Accumulator:
    """Running mean, sum, standard deviation and extremes of a series."""

    def __init__(self):
        self.count = 0
        self.sum = 0.0
        self.sum_of_squares = 0.0
        self.min = math.inf
        self.max = -math.inf
        self._mean = 0.0
        self._m2 = 0.0

    def add(self, value: float, times: int = 1) -> None:
        for _ in range(times):
            value = float(value)
            self.count += 1
            self.sum += value
            self.sum_of_squares += value * value
            self.min = min(self.min, value)
            self.max = max(self.max, value)
            delta = value - self._mean
            self._mean += delta / self.count
            self._m2 += delta * (value - self._mean)

    @property
    def mean(self) -> float:
        self._require_data()
        return self._mean

    @property
    def std(self) -> float:
        """Population standard deviation."""
        self._require_data()
        return math.sqrt(max(self._m2 / self.count, 0.0))

    def query(self) -> AccumulatorSummary:
        self._require_data()
        return AccumulatorSummary(self.mean, self.sum, self.std, self.min, self.max, self.count)

    def _require_data(self):
        if self.count == 0:
            raise EmptyAccumulator("Accumulator holds no values")

    def __len__(self):
        return self.count
