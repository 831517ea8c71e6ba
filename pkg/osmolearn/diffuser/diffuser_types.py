from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from osmolearn.core.core_exceptions import ContractException, PreconditionException, SchemaException
from osmolearn.metrics.metrics_context import group_key, sorted_groups
from osmolearn.model.model_types import ContextBatch


class OsmoticStrategy(Enum):
    """Стратегия синтеза контекстного эмбеддинга"""
    MEAN = "mean"          # квадрат евклидова расстояния: среднее
    MEDIAN = "median"      # евклидово расстояние: геометрическая медиана


@dataclass(frozen=True, eq=False)
class SubContextPartition:
    """Разбиение агентов на непересекающиеся подконтексты"""
    epoch: int
    groups: Tuple[FrozenSet[str], ...]
    score_agents: Tuple[str, ...] = ()
    scores: Optional[np.ndarray] = None

    def __post_init__(self):
        groups = tuple(frozenset(members) for members in sorted_groups(self.groups))
        if not groups:
            raise PreconditionException("Разбиение без групп")
        seen = set()
        for members in groups:
            if not members:
                raise PreconditionException("Пустая группа в разбиении")
            overlap = seen & members
            if overlap:
                raise ContractException(f"Агенты {sorted(overlap)} входят в несколько групп")
            seen |= members
        object.__setattr__(self, 'groups', groups)

    @classmethod
    def global_context(cls, agent_ids: Iterable[str], epoch: int = 0) -> 'SubContextPartition':
        """Начальное разбиение: одна группа из всех агентов"""
        return cls(epoch=epoch, groups=(frozenset(agent_ids),))

    @property
    def agents(self) -> List[str]:
        return sorted(agent_id for members in self.groups for agent_id in members)

    def member_lists(self) -> List[List[str]]:
        return [sorted(members) for members in self.groups]

    def group_ids(self) -> List[str]:
        return [group_key(members) for members in self.groups]

    def same_groups(self, other: 'SubContextPartition') -> bool:
        return self.member_lists() == other.member_lists()

    def to_dict(self) -> Dict[str, Any]:
        """Запись трассы кластеризации"""
        return {
            'epoch': self.epoch,
            'groups': self.member_lists(),
            'agents': list(self.score_agents),
            'scores': None if self.scores is None else self.scores.tolist()
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SubContextPartition':
        try:
            scores = data.get('scores')
            return cls(epoch=int(data['epoch']),
                       groups=tuple(frozenset(str(a) for a in members) for members in data['groups']),
                       score_agents=tuple(str(a) for a in data.get('agents', [])),
                       scores=None if scores is None else np.asarray(scores, dtype=np.float64))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaException(f"Некорректная запись разбиения: {e}")


@dataclass(frozen=True, eq=False)
class ContextBroadcast:
    """Контекстные эмбеддинги для каждого агента на шаге step"""
    step: int
    contexts: Dict[str, ContextBatch] = field(default_factory=dict)

    def for_agent(self, agent_id: str) -> ContextBatch:
        if agent_id not in self.contexts:
            raise ContractException(f"Рассылка шага {self.step} не содержит агента {agent_id}")
        return self.contexts[agent_id]
