from typing import List, Mapping, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from osmolearn.core.core_exceptions import ConfigurationException, PreconditionException
from osmolearn.core.core_utils import CoreUtils
from osmolearn.datagen.datagen_types import AgentDataset
from osmolearn.model.model_types import WindowBatch


def window_array(dataset: AgentDataset, window: int) -> Tuple[np.ndarray, np.ndarray]:
    """Все окна w_t = x[t-L+1 .. t] для t = L-1 .. N-1 и их индексы t"""
    if window < 1:
        raise PreconditionException(f"Длина окна {window} должна быть >= 1")
    if dataset.length < window:
        raise PreconditionException(f"Агент {dataset.agent_id}: N={dataset.length} меньше длины окна L={window}")
    # (N-L+1, k, L) -> (N-L+1, L, k)
    windows = np.ascontiguousarray(sliding_window_view(dataset.features, window, axis=0).transpose(0, 2, 1))
    indices = np.arange(window - 1, dataset.length, dtype=np.int64)
    return windows, indices


def sliding_windows(dataset: AgentDataset, window: int, batch: int) -> List[WindowBatch]:
    """Хронологически упорядоченные пакеты по B окон (последний может быть короче), без перемешивания"""
    if batch < 1:
        raise PreconditionException(f"Размер пакета {batch} должен быть >= 1")
    windows, indices = window_array(dataset, window)
    return [WindowBatch(agent_id=dataset.agent_id, windows=windows[positions], indices=indices[positions])
            for positions in CoreUtils.chunk_list(np.arange(indices.shape[0]), batch)]


def check_alignment(datasets: Mapping[str, AgentDataset]) -> int:
    """Все агенты контекста должны иметь одинаковую длину ряда (общие метки времени)"""
    lengths = {agent_id: dataset.length for agent_id, dataset in datasets.items()}
    if len(set(lengths.values())) != 1:
        raise ConfigurationException(f"Ряды агентов не выровнены по длине: {lengths}")
    return next(iter(lengths.values()))
