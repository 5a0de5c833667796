import numpy as np
import pytest

from tests.helpers import direct_run

DT = 1e-3
MIPS = 10.0


def stepped_finish_times(lengths, arrivals, n_pes, mips=MIPS, dt=DT):
    """Fixed-step reference: shares recomputed from scratch every step."""
    n = len(lengths)
    remaining = list(lengths)
    finish = [None] * n
    step = 0
    while any(f is None for f in finish):
        start, end = step * dt, (step + 1) * dt
        active = [i for i in range(n) if arrivals[i] <= start + 1e-12 and finish[i] is None]
        if active:
            order = sorted(active, key=lambda i: (remaining[i], i))
            per_pe = mips * dt
            if len(order) <= n_pes:
                shares = [per_pe] * len(order)
            else:
                m, r = divmod(len(order), n_pes)
                n_max = (n_pes - r) * m
                shares = [per_pe / m if rank < n_max else per_pe / (m + 1)
                          for rank in range(len(order))]
            for i, share in zip(order, shares):
                remaining[i] -= share
                if remaining[i] <= 1e-12:
                    finish[i] = end
        step += 1
    return finish


def random_instance(rng):
    n = int(rng.integers(1, 9))
    n_pes = int(rng.integers(1, 5))
    lengths = rng.uniform(10.0, 100.0, size=n).round(3).tolist()
    arrivals = np.sort(rng.uniform(0.0, 5.0, size=n)).round(3).tolist()
    return lengths, arrivals, n_pes


@pytest.mark.parametrize("seed", range(100))
def test_event_driven_matches_stepped_reference(seed):
    rng = np.random.default_rng(seed)
    lengths, arrivals, n_pes = random_instance(rng)

    _, _, gridlets = direct_run("time_shared", lengths=lengths, arrivals=arrivals,
                                n_pes=n_pes, mips=MIPS)
    expected = stepped_finish_times(lengths, arrivals, n_pes)

    for gl, reference in zip(gridlets, expected):
        assert gl.finish_time == pytest.approx(reference, rel=0.01)
