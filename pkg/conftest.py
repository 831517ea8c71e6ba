import numpy as np
import pytest

from osmolearn.datagen.datagen_types import AgentDataset, Split
from osmolearn.numerics.numerics_random import RngStream
from osmolearn.orchestrator.orchestrator_config import build_config


@pytest.fixture
def rng():
    return RngStream(1234)


@pytest.fixture
def small_config(tmp_path):
    """Небольшой запуск: короткие ряды, быстрые эпохи"""
    return build_config({
        'context': 'simple',
        'epochs': 2,
        'n_train': 80,
        'n_test': 40,
        'window': 5,
        'batch': 16,
        'cluster_samples': 8,
        'seed': 7,
        'out_dir': str(tmp_path / 'run')
    })


def make_dataset(agent_id: str, values, split: Split = Split.TRAIN) -> AgentDataset:
    return AgentDataset(agent_id=agent_id, split=split, features=np.asarray(values, dtype=np.float64))


@pytest.fixture
def dataset_factory():
    return make_dataset
