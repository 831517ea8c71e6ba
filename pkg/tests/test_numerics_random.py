import numpy as np
import pytest

from osmolearn.core.core_exceptions import PreconditionException
from osmolearn.numerics.numerics_random import RngStream


def test_same_seed_and_path_reproduce():
    a = RngStream(5).spawn('agent', '0').normal(0.0, 1.0, 10)
    b = RngStream(5).spawn('agent', '0').normal(0.0, 1.0, 10)
    np.testing.assert_array_equal(a, b)


def test_substreams_differ():
    root = RngStream(5)
    a = root.spawn('agent', '0').normal(0.0, 1.0, 10)
    b = root.spawn('agent', '1').normal(0.0, 1.0, 10)
    assert not np.array_equal(a, b)


def test_spawn_does_not_consume_parent():
    root = RngStream(9)
    root.spawn('x').uniform(0.0, 1.0, 5)
    np.testing.assert_array_equal(root.uniform(0.0, 1.0, 3), RngStream(9).uniform(0.0, 1.0, 3))


def test_choice_without_replacement():
    positions = RngStream(1).choice(30, 20)
    assert len(set(positions.tolist())) == 20
    assert positions.min() >= 0 and positions.max() < 30
    with pytest.raises(PreconditionException):
        RngStream(1).choice(5, 6)


def test_seed_range():
    with pytest.raises(PreconditionException):
        RngStream(-1)
