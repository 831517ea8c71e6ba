import numpy as np
import pytest

from osmolearn.core.core_exceptions import BarrierException, ContractException, PreconditionException, ShapeException
from osmolearn.diffuser.diffuser_osmotic import osmotic_centroid, step_broadcast, summed_distance
from osmolearn.diffuser.diffuser_types import OsmoticStrategy, SubContextPartition
from osmolearn.model.model_types import EmbeddingBatch
from osmolearn.numerics.numerics_random import RngStream


def _submissions(values_by_agent, indices=None):
    result = {}
    for agent_id, values in values_by_agent.items():
        values = np.asarray(values, dtype=np.float64)
        idx = np.arange(values.shape[0]) if indices is None else indices
        result[agent_id] = EmbeddingBatch(agent_id=agent_id, embeddings=values, indices=idx)
    return result


def test_mean_of_two_points():
    centroid = osmotic_centroid([np.zeros((1, 3)), np.full((1, 3), 2.0)])
    np.testing.assert_array_equal(centroid, np.ones((1, 3)))


def test_singleton_group_returns_copy():
    values = np.array([[1.0, 2.0]])
    centroid = osmotic_centroid({'0': values}, OsmoticStrategy.MEDIAN)
    np.testing.assert_array_equal(centroid, values)
    centroid[0, 0] = 9.0
    assert values[0, 0] == 1.0


def test_mapping_order_does_not_change_result(rng):
    values = {str(i): rng.normal(0.0, 1.0, (4, 5)) for i in range(5)}
    reversed_values = dict(reversed(list(values.items())))
    np.testing.assert_array_equal(osmotic_centroid(values), osmotic_centroid(reversed_values))


def test_invalid_groups():
    with pytest.raises(PreconditionException):
        osmotic_centroid([])
    with pytest.raises(ShapeException):
        osmotic_centroid([np.zeros((2, 3)), np.zeros((3, 3))])


@pytest.mark.parametrize('seed', range(20))
def test_mean_minimizes_squared_distance_on_grid(seed):
    rng = RngStream(seed)
    points = [rng.normal(0.0, 1.0, 5) for _ in range(3)]
    centroid = osmotic_centroid([p[np.newaxis] for p in points])[0]
    np.testing.assert_allclose(centroid, (points[0] + points[1] + points[2]) / 3.0, rtol=0, atol=1e-12)
    best = summed_distance(centroid, points)

    offsets = np.round(np.arange(-0.5, 0.5 + 1e-9, 0.01), 2)
    for axis in range(5):
        for offset in offsets:
            candidate = centroid.copy()
            candidate[axis] += offset
            assert summed_distance(candidate, points) >= best - 1e-12
    for candidate in rng.normal(0.0, 2.0, (50, 5)):
        assert summed_distance(candidate, points) >= best - 1e-12


@pytest.mark.parametrize('seed', range(20))
def test_median_minimizes_euclidean_distance(seed):
    rng = RngStream(seed)
    points = [rng.normal(0.0, 1.0, 2) for _ in range(5)]
    median = osmotic_centroid([p[np.newaxis] for p in points], OsmoticStrategy.MEDIAN)[0]
    best = summed_distance(median, points, squared=False)
    for candidate in median + rng.normal(0.0, 0.1, (50, 2)):
        assert summed_distance(candidate, points, squared=False) >= best - 1e-6


def test_median_resists_outlier():
    points = [np.array([[0.0, 0.0]]), np.array([[0.0, 0.1]]), np.array([[100.0, 100.0]])]
    median = osmotic_centroid(points, OsmoticStrategy.MEDIAN)
    mean = osmotic_centroid(points, OsmoticStrategy.MEAN)
    assert np.linalg.norm(median) < 1.0 < np.linalg.norm(mean)


def test_broadcast_singleton_groups_return_own_embeddings(rng):
    submissions = _submissions({'0': rng.normal(0.0, 1.0, (3, 2)), '1': rng.normal(0.0, 1.0, (3, 2))})
    partition = SubContextPartition(epoch=0, groups=(frozenset({'0'}), frozenset({'1'})))
    broadcast = step_broadcast(submissions, partition)
    for agent_id in ('0', '1'):
        np.testing.assert_array_equal(broadcast.for_agent(agent_id).embeddings, submissions[agent_id].embeddings)
        assert broadcast.for_agent(agent_id).group_id == agent_id


def test_broadcast_global_context_is_shared_mean():
    submissions = _submissions({'0': [[0.0, 0.0]], '1': [[2.0, 4.0]], '2': [[4.0, 2.0]]})
    broadcast = step_broadcast(submissions, SubContextPartition.global_context(['0', '1', '2']), step=3)
    assert broadcast.step == 3
    for agent_id in ('0', '1', '2'):
        np.testing.assert_allclose(broadcast.for_agent(agent_id).embeddings, [[2.0, 2.0]])
    assert broadcast.for_agent('0') is broadcast.for_agent('2')


def test_broadcast_two_groups_do_not_mix():
    submissions = _submissions({'0': [[1.0]], '1': [[3.0]], '2': [[10.0]], '3': [[20.0]]})
    partition = SubContextPartition(epoch=2, groups=(frozenset({'2', '3'}), frozenset({'0', '1'})))
    broadcast = step_broadcast(submissions, partition)
    assert broadcast.for_agent('0').embeddings[0, 0] == 2.0
    assert broadcast.for_agent('3').embeddings[0, 0] == 15.0
    assert broadcast.for_agent('3').group_id == '2+3'


def test_broadcast_is_idempotent(rng):
    submissions = _submissions({'0': rng.normal(0.0, 1.0, (4, 5)), '1': rng.normal(0.0, 1.0, (4, 5))})
    partition = SubContextPartition.global_context(['0', '1'])
    first = step_broadcast(submissions, partition)
    second = step_broadcast(submissions, partition)
    np.testing.assert_array_equal(first.for_agent('0').embeddings, second.for_agent('0').embeddings)


def test_broadcast_names_missing_agent():
    submissions = _submissions({'0': [[1.0]]})
    with pytest.raises(BarrierException, match='агент 1'):
        step_broadcast(submissions, SubContextPartition.global_context(['0', '1']))


def test_broadcast_rejects_unknown_and_misaligned_agents():
    partition = SubContextPartition.global_context(['0', '1'])
    with pytest.raises(ContractException):
        step_broadcast(_submissions({'0': [[1.0]], '1': [[1.0]], '9': [[1.0]]}), partition)
    misaligned = _submissions({'0': [[1.0]]})
    misaligned.update(_submissions({'1': [[1.0]]}, indices=np.array([5])))
    with pytest.raises(ContractException):
        step_broadcast(misaligned, partition)
    with pytest.raises(ContractException):
        step_broadcast(_submissions({'0': [[1.0]], '1': [[1.0]]}), partition).for_agent('7')
