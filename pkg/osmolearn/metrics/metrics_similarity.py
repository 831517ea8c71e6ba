"""
Косинусное сходство с усилением beta: s = sign(cos) * |cos|^beta.

При beta > 1 слабые корреляции подавляются, сильные почти не меняются.
"""
from typing import List, Mapping, Optional, Tuple

import numpy as np

from osmolearn.core.core_exceptions import NumericException, PreconditionException, ShapeException
from osmolearn.metrics.metrics_types import SimilarityMatrix


def _unit_rows(name: str, embeddings: np.ndarray) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(embeddings, dtype=np.float64))
    norms = np.linalg.norm(arr, axis=1)
    if np.any(norms < np.finfo(np.float64).tiny):
        raise NumericException(f"Нулевой эмбеддинг в '{name}': косинус не определен")
    return arr / norms[:, np.newaxis]


def amplify(cosine: np.ndarray, beta: float) -> np.ndarray:
    """sign(c) * |c|^beta"""
    if beta < 1.0:
        raise PreconditionException(f"beta={beta} должна быть >= 1")
    cosine = np.clip(cosine, -1.0, 1.0)
    return np.sign(cosine) * np.abs(cosine) ** beta


def modified_similarity(e_a: np.ndarray, e_b: np.ndarray, beta: float) -> float:
    """Сходство двух эмбеддингов"""
    unit_a = _unit_rows('e_a', e_a)[0]
    unit_b = _unit_rows('e_b', e_b)[0]
    return float(amplify(np.dot(unit_a, unit_b), beta))


def paired_similarity(emb_a: np.ndarray, emb_b: np.ndarray, beta: float) -> np.ndarray:
    """Сходство построчно выровненных эмбеддингов (одинаковые индексы t)"""
    if np.shape(emb_a) != np.shape(emb_b):
        raise ShapeException(f"Формы эмбеддингов {np.shape(emb_a)} и {np.shape(emb_b)} различаются")
    cosine = np.sum(_unit_rows('emb_a', emb_a) * _unit_rows('emb_b', emb_b), axis=1)
    return amplify(cosine, beta)


def similarity_matrix(emb_a: np.ndarray, emb_b: np.ndarray, beta: float,
                      agent_a: str = 'a', agent_b: str = 'b',
                      indices: Optional[np.ndarray] = None) -> SimilarityMatrix:
    """values[p][q] = s(emb_a[p], emb_b[q])"""
    if np.shape(emb_a)[0] != np.shape(emb_b)[0]:
        raise ShapeException(f"Число эмбеддингов агентов {agent_a} и {agent_b} различается: "
                             f"{np.shape(emb_a)[0]} != {np.shape(emb_b)[0]}")
    cosine = np.clip(_unit_rows(agent_a, emb_a) @ _unit_rows(agent_b, emb_b).T, -1.0, 1.0)
    if indices is None:
        indices = np.arange(cosine.shape[0])
    return SimilarityMatrix(agent_a=agent_a, agent_b=agent_b, values=amplify(cosine, beta),
                            cosine=cosine, indices=np.asarray(indices, dtype=np.int64), beta=beta)


def agent_similarity_matrix(embeddings: Mapping[str, np.ndarray], beta: float) -> Tuple[List[str], np.ndarray]:
    """Среднее по t сходство агентов: (i, j) = mean_t s(e_i^(t), e_j^(t))"""
    agent_ids = sorted(embeddings)
    size = len(agent_ids)
    matrix = np.eye(size)
    for i in range(size):
        for j in range(i + 1, size):
            score = float(np.mean(paired_similarity(embeddings[agent_ids[i]], embeddings[agent_ids[j]], beta)))
            matrix[i, j] = matrix[j, i] = score
    return agent_ids, matrix
