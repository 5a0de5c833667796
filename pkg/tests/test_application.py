import numpy as np
import pytest

from gridmarket_lib.application import (Gridlet, GridletBatch, GridletStatus, RandomMapper,
                                        real_random, standard_pe_rating, synth_workload)
from gridmarket_lib.errors import InvalidFactor, InvalidRating, ProtocolError


@pytest.mark.parametrize("d, f_l, f_m, rd, expected", [
    (100.0, 0.2, 0.3, 0.0, 80.0),
    (100.0, 0.0, 0.1, 0.5, 105.0),
    (100.0, 0.0, 0.0, 0.73, 100.0),
])
def test_real_random(d, f_l, f_m, rd, expected):
    assert real_random(d, f_l, f_m, rd) == pytest.approx(expected)


@pytest.mark.parametrize("f_l, f_m, rd", [(1.5, 0.0, 0.1), (0.0, -0.1, 0.1), (0.0, 0.0, 1.0)])
def test_real_random_rejects_bad_factors(f_l, f_m, rd):
    with pytest.raises(InvalidFactor):
        real_random(100.0, f_l, f_m, rd)


def test_real_random_bounds():
    rng = np.random.default_rng(3)
    draws = rng.random((100_000, 4))
    for d_raw, f_l, f_m, rd in draws:
        d = 1.0 + 1000.0 * d_raw
        value = real_random(d, f_l, f_m, rd)
        assert (1 - f_l) * d - 1e-9 <= value < (1 + f_m) * d + 1e-9


def test_workload_lengths_within_variation():
    batch = synth_workload(200, 100.0, 0.1, 100.0, seed=1)
    lengths = [gl.length_mi for gl in batch]
    assert len(batch) == 200
    assert all(10000.0 <= x < 11000.0 for x in lengths)
    assert [gl.id for gl in batch] == list(range(200))
    assert all(gl.status is GridletStatus.CREATED for gl in batch)


def test_workload_without_variation():
    batch = synth_workload(5, 100.0, 0.0, 100.0, seed=1)
    assert [gl.length_mi for gl in batch] == [10000.0] * 5


def test_workload_is_a_function_of_its_seed():
    first = [gl.length_mi for gl in synth_workload(50, 100.0, 0.1, 100.0, seed=9)]
    second = [gl.length_mi for gl in synth_workload(50, 100.0, 0.1, 100.0, seed=9)]
    other = [gl.length_mi for gl in synth_workload(50, 100.0, 0.1, 100.0, seed=10)]
    assert first == second
    assert first != other


def test_workload_io_sizes():
    batch = synth_workload(3, 1.0, 0.0, None, seed=0, input_size_bytes=500, output_size_bytes=20)
    assert all((gl.input_size_bytes, gl.output_size_bytes) == (500, 20) for gl in batch)
    assert batch.total_mi == pytest.approx(300.0)


@pytest.mark.parametrize("configured, expected", [(None, 100.0), (500.0, 500.0)])
def test_standard_pe_rating(configured, expected):
    assert standard_pe_rating(configured) == expected


def test_standard_pe_rating_must_be_positive():
    with pytest.raises(InvalidRating):
        standard_pe_rating(0.0)


def test_random_mapper_situations():
    mapper = RandomMapper(4, {"network": (0.1, 0.2)})
    assert mapper.factors("network") == (0.1, 0.2)
    value = mapper.real(50.0, "network")
    assert 45.0 <= value < 60.0
    with pytest.raises(KeyError):
        mapper.real(50.0, "disk")
    with pytest.raises(InvalidFactor):
        mapper.set_factors("disk", 2.0, 0.0)


def test_random_mapper_stream_is_seeded():
    a, b = RandomMapper(5), RandomMapper(5)
    assert [a.uniform() for _ in range(10)] == [b.uniform() for _ in range(10)]


def test_gridlet_validation():
    with pytest.raises(ValueError):
        Gridlet(0, 0.0)
    with pytest.raises(ValueError):
        Gridlet(0, 10.0, input_size_bytes=-1)


def test_batch_ids_are_unique():
    with pytest.raises(ValueError):
        GridletBatch([Gridlet(1, 10.0), Gridlet(1, 20.0)])


def test_batch_lookup_and_progress():
    batch = GridletBatch([Gridlet(i, 10.0) for i in range(3)])
    batch.get(1).status = GridletStatus.SUCCESS
    assert [gl.id for gl in batch.finished()] == [1]
    assert [gl.id for gl in batch.unfinished()] == [0, 2]
    with pytest.raises(ProtocolError):
        batch.get(7)
