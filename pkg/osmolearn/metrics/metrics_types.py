from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np


@dataclass(eq=False)
class SimilarityMatrix:
    """Матрица сходства T x T между эмбеддингами двух агентов"""
    agent_a: str
    agent_b: str
    values: np.ndarray           # сходство по формуле с beta
    cosine: np.ndarray           # исходный косинус (beta = 1)
    indices: np.ndarray          # логические индексы строк/столбцов
    beta: float

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def diagonal_mean(self, absolute: bool = False) -> float:
        diagonal = np.diag(self.values)
        return float(np.mean(np.abs(diagonal) if absolute else diagonal))


@dataclass
class GroupMetric:
    """Метрики одной подконтекстной группы"""
    group_id: str
    members: List[str]
    accuracy: Optional[float]
    loss: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'group_id': self.group_id,
            'members': self.members,
            'accuracy': self.accuracy,
            'loss': self.loss
        }


@dataclass
class MetricRecord:
    """Запись метрик эпохи для одного разбиения данных (train/test)"""
    epoch: int
    split: str
    context_accuracy: Optional[float]
    context_loss: float
    groups: List[GroupMetric] = field(default_factory=list)
    flagged: bool = False
    message: str = ""
    embedding_spread: Dict[str, float] = field(default_factory=dict)
    agent_similarity: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        """Преобразование в словарь"""
        result = {
            'epoch': self.epoch,
            'split': self.split,
            'context_accuracy': self.context_accuracy,
            'context_loss': self.context_loss,
            'groups': [group.to_dict() for group in self.groups],
            'flagged': self.flagged,
            'message': self.message,
            'embedding_spread': self.embedding_spread
        }
        if self.agent_similarity is not None:
            result['agent_similarity'] = self.agent_similarity
        return result
