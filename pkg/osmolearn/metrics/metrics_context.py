"""
Метрики контекста: точность (среднее попарное сходство внутри группы) и
потери (средние суммарные потери агентов).

Группы передаются как последовательности идентификаторов агентов, так что
модуль не зависит от типов диффузора.
"""
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from osmolearn.core.core_exceptions import ShapeException, UndefinedMetricException
from osmolearn.metrics.metrics_similarity import paired_similarity


def group_key(members: Iterable[str]) -> str:
    """Идентификатор группы: отсортированные участники через '+'"""
    return '+'.join(sorted(members))


def _check_aligned(values: Mapping[str, np.ndarray], members: Sequence[str]):
    lengths = {agent_id: np.shape(values[agent_id])[0] for agent_id in members}
    if len(set(lengths.values())) > 1:
        raise ShapeException(f"Агенты оценены на разном числе индексов: {lengths}")


def group_accuracy(embeddings: Mapping[str, np.ndarray], members: Sequence[str]) -> Optional[float]:
    """Точность одной группы; None для одиночной группы (формула не определена)"""
    members = sorted(members)
    if len(members) < 2:
        return None
    _check_aligned(embeddings, members)

    pair_means = []
    for i, agent_i in enumerate(members):
        for agent_j in members[i + 1:]:
            # s01 = (cos + 1) / 2 на исходном косинусе, без beta
            cosine = paired_similarity(embeddings[agent_i], embeddings[agent_j], beta=1.0)
            pair_means.append(np.mean((cosine + 1.0) / 2.0))
    return float(np.mean(pair_means))


def group_accuracies(embeddings: Mapping[str, np.ndarray],
                     groups: Sequence[Sequence[str]]) -> Dict[str, Optional[float]]:
    return {group_key(members): group_accuracy(embeddings, members) for members in groups}


def context_accuracy(embeddings: Mapping[str, np.ndarray], groups: Sequence[Sequence[str]]) -> float:
    """Средняя точность по группам размера >= 2"""
    defined = [value for value in group_accuracies(embeddings, groups).values() if value is not None]
    if not defined:
        raise UndefinedMetricException("context_accuracy: нет ни одной группы из двух и более агентов")
    return float(np.mean(defined))


def group_loss(losses: Mapping[str, np.ndarray], members: Sequence[str]) -> float:
    """(1/(nT)) * sum_t sum_i L_i^(t) по участникам группы"""
    members = sorted(members)
    _check_aligned(losses, members)
    return float(np.mean([np.asarray(losses[agent_id], dtype=np.float64) for agent_id in members]))


def group_losses(losses: Mapping[str, np.ndarray], groups: Sequence[Sequence[str]]) -> Dict[str, float]:
    return {group_key(members): group_loss(losses, members) for members in groups}


def context_loss(losses: Mapping[str, np.ndarray], groups: Sequence[Sequence[str]]) -> float:
    """Потери контекста: по группам, затем среднее между группами"""
    return float(np.mean(list(group_losses(losses, groups).values())))


def embedding_spread(embeddings: np.ndarray) -> float:
    """Стандартное отклонение по каждой размерности, усредненное по размерностям"""
    arr = np.atleast_2d(np.asarray(embeddings, dtype=np.float64))
    return float(np.mean(np.std(arr, axis=0)))


def sorted_groups(groups: Iterable[Iterable[str]]) -> List[List[str]]:
    """Канонический порядок групп: по отсортированному списку участников"""
    return sorted((sorted(members) for members in groups), key=lambda members: members)
