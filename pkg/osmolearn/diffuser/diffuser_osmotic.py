"""
Осмотическая стратегия: контекстный эмбеддинг - точка, минимизирующая
суммарное расстояние до локальных эмбеддингов группы на каждом индексе t.

Для квадрата евклидова расстояния минимум - среднее (замкнутая форма),
для евклидова расстояния - геометрическая медиана (итерации Вейсфельда).
"""
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from osmolearn.core.core_exceptions import BarrierException, ContractException, PreconditionException, ShapeException
from osmolearn.diffuser.diffuser_types import ContextBroadcast, OsmoticStrategy, SubContextPartition
from osmolearn.metrics.metrics_context import group_key
from osmolearn.model.model_types import ContextBatch, EmbeddingBatch

MEDIAN_TOLERANCE = 1e-10
MEDIAN_MAX_ITERATIONS = 200

Embeddings = Union[Mapping[str, np.ndarray], Sequence[np.ndarray]]


def _stack(embeddings: Embeddings) -> np.ndarray:
    if isinstance(embeddings, Mapping):
        # фиксированный порядок редукции: отсортированные идентификаторы
        arrays = [embeddings[agent_id] for agent_id in sorted(embeddings)]
    else:
        arrays = list(embeddings)
    if not arrays:
        raise PreconditionException("osmotic_centroid: пустая группа")
    arrays = [np.atleast_2d(np.asarray(a, dtype=np.float64)) for a in arrays]
    shapes = {a.shape for a in arrays}
    if len(shapes) != 1:
        raise ShapeException(f"osmotic_centroid: эмбеддинги группы не выровнены: {sorted(shapes)}")
    return np.stack(arrays)


def _geometric_median(points: np.ndarray) -> np.ndarray:
    """Итерации Вейсфельда для каждого индекса t; points: (n, B, d)"""
    estimate = points.mean(axis=0)
    floor = np.finfo(np.float64).eps
    for _ in range(MEDIAN_MAX_ITERATIONS):
        distances = np.linalg.norm(points - estimate, axis=2)
        weights = 1.0 / np.maximum(distances, floor)
        updated = np.einsum('nb,nbd->bd', weights, points) / weights.sum(axis=0)[:, np.newaxis]
        shift = np.max(np.abs(updated - estimate))
        estimate = updated
        if shift < MEDIAN_TOLERANCE:
            break
    return estimate


def osmotic_centroid(embeddings: Embeddings, strategy: OsmoticStrategy = OsmoticStrategy.MEAN) -> np.ndarray:
    """Контекстный эмбеддинг группы для каждого индекса t, форма (B, d)"""
    points = _stack(embeddings)
    if points.shape[0] == 1:
        return points[0].copy()
    if strategy is OsmoticStrategy.MEAN:
        return points.mean(axis=0)
    if strategy is OsmoticStrategy.MEDIAN:
        return _geometric_median(points)
    raise ContractException(f"osmotic_centroid: неизвестная стратегия {strategy}")


def step_broadcast(submissions: Mapping[str, EmbeddingBatch], partition: SubContextPartition,
                   strategy: OsmoticStrategy = OsmoticStrategy.MEAN, step: int = 0) -> ContextBroadcast:
    """Центроид каждой группы рассылается всем ее участникам"""
    for agent_id in partition.agents:
        if agent_id not in submissions:
            raise BarrierException(f"Шаг {step}: агент {agent_id} не отправил эмбеддинги")
    unknown = sorted(set(submissions) - set(partition.agents))
    if unknown:
        raise ContractException(f"Шаг {step}: эмбеддинги от агентов вне разбиения: {unknown}")

    reference = submissions[partition.agents[0]].indices
    for agent_id in partition.agents:
        if not np.array_equal(submissions[agent_id].indices, reference):
            raise ContractException(f"Шаг {step}: индексы пакета агента {agent_id} не совпадают с остальными")

    contexts = {}
    for members in partition.groups:
        members = sorted(members)
        centroid = osmotic_centroid({agent_id: submissions[agent_id].embeddings for agent_id in members}, strategy)
        context = ContextBatch(group_id=group_key(members), embeddings=centroid, indices=reference)
        for agent_id in members:
            contexts[agent_id] = context
    return ContextBroadcast(step=step, contexts=contexts)


def summed_distance(point: np.ndarray, embeddings: Iterable[np.ndarray], squared: bool = True) -> float:
    """Суммарное расстояние от точки до эмбеддингов группы (целевая функция стратегии)"""
    distances = [np.linalg.norm(np.asarray(e, dtype=np.float64) - point, axis=-1) for e in embeddings]
    total = np.sum([d ** 2 if squared else d for d in distances])
    return float(total)
