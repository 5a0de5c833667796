from typing import Dict, Optional, Tuple

import numpy as np

from ..errors import InvalidFactor, InvalidRating
from ..utils import STANDARD_PE_MIPS

# ---------- RANDOMNESS ----------

def _check_factor(name: str, value: float):
    if not 0.0 <= value <= 1.0:
        raise InvalidFactor(f"{name} must lie in [0, 1], got {value}")


def real_random(d: float, f_l: float, f_m: float, rd: float) -> float:
    """Maps an estimate d into [(1 - f_L) d, (1 + f_M) d) with d * (1 - f_L + (f_L + f_M) * rd)."""
    _check_factor("f_L", f_l)
    _check_factor("f_M", f_m)
    if not 0.0 <= rd < 1.0:
        raise InvalidFactor(f"rd must lie in [0, 1), got {rd}")
    return d * (1.0 - f_l + (f_l + f_m) * rd)


class RandomMapper:
    """
    Seeded source of real-world variation.

    The uniform draws come from numpy's PCG64 bit generator
    (`numpy.random.default_rng(seed)`), so a seed fixes the whole stream.
    """

    def __init__(self, seed: int, factors: Optional[Dict[str, Tuple[float, float]]] = None):
        if seed < 0:
            raise ValueError(f"Seed must be non-negative, got {seed}")
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self._factors: Dict[str, Tuple[float, float]] = {}
        for situation, (f_l, f_m) in (factors or {}).items():
            self.set_factors(situation, f_l, f_m)

    def set_factors(self, situation: str, f_l: float, f_m: float):
        _check_factor("f_L", f_l)
        _check_factor("f_M", f_m)
        self._factors[situation] = (f_l, f_m)

    def factors(self, situation: str) -> Tuple[float, float]:
        if situation not in self._factors:
            raise KeyError(f"No f_L/f_M factors configured for situation '{situation}'")
        return self._factors[situation]

    def uniform(self) -> float:
        return float(self._rng.random())

    def real_with(self, d: float, f_l: float, f_m: float) -> float:
        return real_random(d, f_l, f_m, self.uniform())

    def real(self, d: float, situation: str) -> float:
        f_l, f_m = self.factors(situation)
        return self.real_with(d, f_l, f_m)


# ---------- STANDARD PE ----------

def standard_pe_rating(configured: Optional[float] = None) -> float:
    """MIPS rating of the reference PE job lengths are expressed against."""
    rating = STANDARD_PE_MIPS if configured is None else float(configured)
    if rating <= 0:
        raise InvalidRating(f"Standard PE rating must be positive, got {rating}")
    return rating
