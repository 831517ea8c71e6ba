from dataclasses import dataclass, replace
from typing import Dict, Optional

import numpy as np

from osmolearn.core.core_exceptions import ContractException, ShapeException
from osmolearn.numerics.numerics_random import RngStream
from osmolearn.numerics.numerics_types import AdamState, GruParams, LinearParams, check_finite
from osmolearn.settings import get_setting


@dataclass(frozen=True, eq=False)
class AgentModel:
    """Локальная модель агента f_i = h o g_i: GRU (in=k_i) и проекция 20 -> 5"""
    agent_id: str
    n_features: int
    gru: GruParams
    proj: LinearParams
    optimizer_state: AdamState

    def __post_init__(self):
        if self.gru.input_size != self.n_features:
            raise ShapeException(f"Агент {self.agent_id}: вход GRU {self.gru.input_size} != k_i {self.n_features}")
        if self.proj.in_features != self.gru.hidden_size:
            raise ShapeException(f"Агент {self.agent_id}: вход проекции {self.proj.in_features} "
                                 f"!= скрытое состояние {self.gru.hidden_size}")

    @property
    def hidden_size(self) -> int:
        return self.gru.hidden_size

    @property
    def embedding_size(self) -> int:
        return self.proj.out_features

    def blocks(self) -> Dict[str, np.ndarray]:
        """Все блоки параметров с префиксами 'gru.' и 'proj.'"""
        blocks = {f"gru.{name}": arr for name, arr in self.gru.blocks().items()}
        blocks.update({f"proj.{name}": arr for name, arr in self.proj.blocks().items()})
        return blocks

    def param_count(self) -> int:
        return self.gru.param_count() + self.proj.param_count()

    def with_blocks(self, blocks: Dict[str, np.ndarray], optimizer_state: Optional[AdamState] = None) -> 'AgentModel':
        """Новая модель с заменой блоков параметров"""
        gru = GruParams.from_blocks({k[len('gru.'):]: v for k, v in blocks.items() if k.startswith('gru.')})
        proj = LinearParams.from_blocks({k[len('proj.'):]: v for k, v in blocks.items() if k.startswith('proj.')})
        return replace(self, gru=gru, proj=proj,
                       optimizer_state=self.optimizer_state if optimizer_state is None else optimizer_state)


def init_agent_model(agent_id: str, n_features: int, rng: RngStream,
                     hidden_size: Optional[int] = None, embedding_size: Optional[int] = None) -> AgentModel:
    """Инициализация модели агента из его подпотока случайных чисел"""
    hidden_size = hidden_size or int(get_setting('HIDDEN_SIZE', 20))
    embedding_size = embedding_size or int(get_setting('EMBEDDING_SIZE', 5))
    gru = GruParams.initialize(n_features, hidden_size, rng.spawn('gru'))
    proj = LinearParams.initialize(hidden_size, embedding_size, rng.spawn('proj'))
    state = AdamState.zeros_like({**{f"gru.{k}": v for k, v in gru.blocks().items()},
                                  **{f"proj.{k}": v for k, v in proj.blocks().items()}})
    return AgentModel(agent_id=agent_id, n_features=n_features, gru=gru, proj=proj, optimizer_state=state)


def _check_indices(agent_id: str, indices: np.ndarray, rows: int):
    if indices.shape != (rows,):
        raise ShapeException(f"Агент {agent_id}: индексов {indices.shape[0] if indices.ndim else 0}, строк {rows}")
    if rows > 1 and np.any(np.diff(indices) <= 0):
        raise ContractException(f"Агент {agent_id}: индексы должны строго возрастать (хронологический порядок)")


@dataclass(frozen=True, eq=False)
class WindowBatch:
    """Пакет окон агента: B последовательностей длины L по k_i признакам"""
    agent_id: str
    windows: np.ndarray          # (B, L, k_i)
    indices: np.ndarray          # логическая позиция t последнего шага каждого окна

    def __post_init__(self):
        object.__setattr__(self, 'windows', np.asarray(self.windows, dtype=np.float64))
        object.__setattr__(self, 'indices', np.asarray(self.indices, dtype=np.int64))
        if self.windows.ndim != 3:
            raise ShapeException(f"Агент {self.agent_id}: окна должны иметь форму (B, L, k), получено {self.windows.shape}")
        _check_indices(self.agent_id, self.indices, self.windows.shape[0])

    @property
    def size(self) -> int:
        return self.windows.shape[0]

    @property
    def window_length(self) -> int:
        return self.windows.shape[1]

    @property
    def n_features(self) -> int:
        return self.windows.shape[2]


@dataclass(frozen=True, eq=False)
class EmbeddingBatch:
    """Пакет локальных эмбеддингов агента, выровненный по логическим индексам"""
    agent_id: str
    embeddings: np.ndarray       # (B, d)
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'embeddings', np.asarray(self.embeddings, dtype=np.float64))
        object.__setattr__(self, 'indices', np.asarray(self.indices, dtype=np.int64))
        if self.embeddings.ndim != 2:
            raise ShapeException(f"Агент {self.agent_id}: эмбеддинги должны иметь форму (B, d), "
                                 f"получено {self.embeddings.shape}")
        _check_indices(self.agent_id, self.indices, self.embeddings.shape[0])
        check_finite(f"embeddings[{self.agent_id}]", self.embeddings)

    @property
    def size(self) -> int:
        return self.embeddings.shape[0]


@dataclass(frozen=True, eq=False)
class ContextBatch:
    """Контекстные эмбеддинги группы, выровненные по индексам пакета агента"""
    group_id: str
    embeddings: np.ndarray       # (B, d)
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'embeddings', np.asarray(self.embeddings, dtype=np.float64))
        object.__setattr__(self, 'indices', np.asarray(self.indices, dtype=np.int64))
        if self.embeddings.ndim != 2:
            raise ShapeException(f"Контекст {self.group_id}: ожидалась форма (B, d), получено {self.embeddings.shape}")
        _check_indices(self.group_id, self.indices, self.embeddings.shape[0])

    @property
    def size(self) -> int:
        return self.embeddings.shape[0]
