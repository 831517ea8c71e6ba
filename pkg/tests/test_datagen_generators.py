import numpy as np
import pytest

from osmolearn.core.core_exceptions import ConfigurationException, NumericException, PreconditionException
from osmolearn.datagen.datagen_generators import (
    DEFAULT_CONSTANTS, gen_complex, gen_context, gen_misleading, gen_simple, ramp_plateau, round_half_away
)
from osmolearn.datagen.datagen_types import AgentDataset, ContextName, ContextSpec, Split


def _series(datasets, split, agent_id, column=0):
    return datasets[split][agent_id].features[:, column]


def test_ramp_plateau_shape():
    values, plateau = ramp_plateau(np.arange(100), 100)
    assert values[0] == 0.0
    assert values[24] == pytest.approx(1.0)
    assert np.all(values[25:75] == 1.0)
    assert values[75] == pytest.approx(1.0)
    assert values[99] == pytest.approx(0.0)
    assert plateau.sum() == 50
    assert np.all((values >= 0.0) & (values <= 1.0))


def test_ramp_plateau_repeats():
    values, _ = ramp_plateau(np.arange(300), 100)
    np.testing.assert_array_equal(values[:100], values[200:])
    with pytest.raises(PreconditionException):
        ramp_plateau(np.arange(10), 4)


def test_round_half_away_from_zero():
    np.testing.assert_array_equal(round_half_away(np.array([0.5, 1.5, 2.5, -0.5, 0.49])), [1.0, 2.0, 3.0, -1.0, 0.0])


def test_same_seed_same_series():
    first, second = gen_simple(5), gen_simple(5)
    for split in Split:
        for agent_id in ('0', '1'):
            np.testing.assert_array_equal(_series(first, split, agent_id), _series(second, split, agent_id))
    assert not np.array_equal(_series(gen_simple(6), Split.TRAIN, '1'), _series(first, Split.TRAIN, '1'))


def test_split_sizes():
    datasets = gen_simple(1, n_train=1000, n_test=200)
    assert datasets[Split.TRAIN]['0'].length == 1000
    assert datasets[Split.TEST]['1'].length == 200


def test_simple_agents_are_correlated():
    datasets = gen_simple(42)
    corr = np.corrcoef(_series(datasets, Split.TRAIN, '0'), _series(datasets, Split.TRAIN, '1'))[0, 1]
    assert corr > 0.8


def test_simple_agents_differ_only_on_plateau():
    datasets = gen_simple(42)
    _, plateau = ramp_plateau(np.arange(1000), DEFAULT_CONSTANTS.base_period)
    diff = _series(datasets, Split.TRAIN, '0') - _series(datasets, Split.TRAIN, '1')
    assert np.max(np.abs(diff[~plateau])) < 4 * DEFAULT_CONSTANTS.jitter_sigma
    assert np.max(np.abs(diff[plateau])) > 0.25


def test_simple_agents_share_one_jittered_signal():
    datasets = gen_simple(42)
    base, plateau = ramp_plateau(np.arange(1000), DEFAULT_CONSTANTS.base_period)
    agent_0 = _series(datasets, Split.TRAIN, '0')
    agent_1 = _series(datasets, Split.TRAIN, '1')
    jitter = agent_1 - base
    assert np.max(np.abs(jitter)) < 5 * DEFAULT_CONSTANTS.jitter_sigma
    assert abs(jitter.std() - DEFAULT_CONSTANTS.jitter_sigma) < 0.005
    np.testing.assert_array_equal(agent_0[~plateau], agent_1[~plateau])


def test_misleading_agents_are_standard_noise():
    datasets = gen_misleading(42, count=3)
    assert sorted(datasets[Split.TRAIN]) == ['M0', 'M1', 'M2']
    series = _series(datasets, Split.TRAIN, 'M1')
    assert abs(series.mean()) < 0.15
    assert abs(series.std() - 1.0) < 0.1
    corr = np.corrcoef(series, _series(gen_simple(42), Split.TRAIN, '1'))[0, 1]
    assert abs(corr) < 0.15
    with pytest.raises(PreconditionException):
        gen_misleading(42, count=0)


def test_complex_context_structure():
    datasets = gen_complex(42)
    simple = gen_simple(42)
    train = datasets[Split.TRAIN]
    assert sorted(train) == ['0', '1', '2', '3', '4']
    assert train['4'].n_features == 2
    np.testing.assert_allclose(train['0'].features - simple[Split.TRAIN]['0'].features, 2.0)
    np.testing.assert_allclose(train['1'].features - simple[Split.TRAIN]['1'].features, 4.0)


def test_complex_inverted_agent_is_anticorrelated():
    train = gen_complex(42)[Split.TRAIN]
    assert np.corrcoef(train['2'].features[:, 0], train['3'].features[:, 0])[0, 1] < -0.95


def test_complex_second_subcontext_shares_one_signal():
    train = gen_complex(42)[Split.TRAIN]
    signal = train['2'].features[:, 0]
    second, _ = ramp_plateau(np.arange(1000), DEFAULT_CONSTANTS.second_period)
    assert np.max(np.abs(signal - second)) < 5 * DEFAULT_CONSTANTS.jitter_sigma
    np.testing.assert_allclose(train['3'].features[:, 0], 1.0 - signal, atol=1e-15)
    np.testing.assert_array_equal(train['4'].features[:, 0], round_half_away(10.0 * np.clip(signal, 0.0, 1.0)))
    oscillation = DEFAULT_CONSTANTS.mixed_amplitude * np.sin(2.0 * np.pi * np.arange(1000) / DEFAULT_CONSTANTS.mixed_period)
    np.testing.assert_allclose(train['4'].features[:, 1] - oscillation, 0.5 * signal, atol=1e-12)


def test_complex_discrete_feature_levels():
    discrete = gen_complex(42)[Split.TEST]['4'].features[:, 0]
    assert set(np.unique(discrete)) <= set(float(level) for level in range(11))


def test_gen_context_presets():
    spec = ContextSpec(name=ContextName.MISLEADING, seed=3, n_train=50, n_test=20, misleading_count=2)
    datasets = gen_context(spec)
    assert sorted(datasets[Split.TEST]) == ['0', '1', 'M0', 'M1']
    assert datasets[Split.TEST]['0'].length == 20
    with pytest.raises(ConfigurationException):
        ContextSpec(name=ContextName.SIMPLE, seed=1, n_train=0)


def test_dataset_validation():
    dataset = AgentDataset(agent_id='0', split=Split.TRAIN, features=[1.0, 2.0, 3.0])
    assert dataset.features.shape == (3, 1)
    assert dataset.feature_names == ('feature_0',)
    np.testing.assert_array_equal(dataset.timestamps, [0, 1, 2])
    with pytest.raises(NumericException):
        AgentDataset(agent_id='0', split=Split.TRAIN, features=[1.0, np.nan])
