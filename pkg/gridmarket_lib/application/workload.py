from typing import Optional

from ..errors import InvalidFactor
from .gridlet import Gridlet, GridletBatch
from .random_mapper import RandomMapper, standard_pe_rating


def synth_workload(n: int, base_time_units: float, variation: float,
                   standard_pe_mips: Optional[float], seed: int,
                   input_size_bytes: int = 0, output_size_bytes: int = 0,
                   first_id: int = 0) -> GridletBatch:
    """
    Task-farming batch: n jobs that each take at least base_time_units on the
    standard PE, plus up to `variation` on the positive side.
    """
    if n < 1:
        raise ValueError(f"Workload needs at least one gridlet, got {n}")
    if not 0.0 <= variation <= 1.0:
        raise InvalidFactor(f"variation must lie in [0, 1], got {variation}")
    rating = standard_pe_rating(standard_pe_mips)
    mapper = RandomMapper(seed)
    base_mi = base_time_units * rating
    gridlets = [
        Gridlet(first_id + i, mapper.real_with(base_mi, 0.0, variation),
                input_size_bytes, output_size_bytes)
        for i in range(n)
    ]
    return GridletBatch(gridlets)
