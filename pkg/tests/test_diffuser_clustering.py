import numpy as np
import pytest

from osmolearn.core.core_exceptions import ContractException, PreconditionException
from osmolearn.diffuser.diffuser_clustering import cluster_agents, partition_schedule
from osmolearn.model.model_types import EmbeddingBatch


def _samples(values_by_agent):
    return {agent_id: EmbeddingBatch(agent_id=agent_id, embeddings=np.asarray(values, dtype=np.float64),
                                     indices=np.arange(len(values)))
            for agent_id, values in values_by_agent.items()}


@pytest.mark.parametrize('epoch,period,expected', [
    (0, 2, False), (1, 2, False), (2, 2, True), (4, 2, True), (3, 1, True), (5, 3, False), (6, 3, True)
])
def test_partition_schedule(epoch, period, expected):
    assert partition_schedule(epoch, period) is expected


def test_partition_schedule_rejects_zero_period():
    with pytest.raises(PreconditionException):
        partition_schedule(2, 0)


def test_identical_agents_form_one_group():
    values = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
    partition = cluster_agents(_samples({'0': values, '1': values, '2': values}), tau=0.97, beta=2.0, epoch=2)
    assert partition.member_lists() == [['0', '1', '2']]
    assert partition.epoch == 2
    np.testing.assert_allclose(partition.scores, np.ones((3, 3)))


def test_orthogonal_agents_stay_apart():
    partition = cluster_agents(_samples({'0': [[1.0, 0.0]], '1': [[0.0, 1.0]], '2': [[-1.0, 0.0]]}),
                               tau=0.5, beta=2.0)
    assert partition.member_lists() == [['0'], ['1'], ['2']]


def test_groups_are_connected_components():
    # 0~1 и 1~2 выше порога, 0~2 ниже: транзитивное объединение
    angle = np.deg2rad(30.0)
    values = {
        '0': [[1.0, 0.0]],
        '1': [[np.cos(angle), np.sin(angle)]],
        '2': [[np.cos(2 * angle), np.sin(2 * angle)]],
        '3': [[0.0, -1.0]],
    }
    partition = cluster_agents(_samples(values), tau=0.7, beta=1.0)
    assert partition.scores[0, 2] < 0.7
    assert partition.member_lists() == [['0', '1', '2'], ['3']]


def test_partition_does_not_depend_on_agent_order(rng):
    values = {str(i): rng.normal(0.0, 1.0, (6, 3)) for i in range(4)}
    values['4'] = values['0'] * 2.0
    forward = cluster_agents(_samples(values), tau=0.5, beta=2.0)
    backward = cluster_agents(_samples(dict(reversed(list(values.items())))), tau=0.5, beta=2.0)
    assert forward.member_lists() == backward.member_lists()
    assert any({'0', '4'} <= set(members) for members in forward.member_lists())


def test_misaligned_samples_are_rejected():
    samples = _samples({'0': [[1.0]]})
    samples['1'] = EmbeddingBatch(agent_id='1', embeddings=np.ones((1, 1)), indices=[3])
    with pytest.raises(ContractException):
        cluster_agents(samples, tau=0.5, beta=2.0)
    with pytest.raises(PreconditionException):
        cluster_agents({}, tau=0.5, beta=2.0)
