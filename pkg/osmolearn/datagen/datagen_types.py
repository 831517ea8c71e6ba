from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, Tuple

import numpy as np

from osmolearn.core.core_exceptions import ConfigurationException, NumericException, ShapeException


class Split(Enum):
    TRAIN = "train"
    TEST = "test"


class ContextName(Enum):
    """Экспериментальные контексты"""
    SIMPLE = "simple"
    MISLEADING = "simple+misleading"
    COMPLEX = "complex"


# Эпохи по умолчанию для каждого контекста
PRESET_EPOCHS = {
    ContextName.SIMPLE: 5,
    ContextName.MISLEADING: 5,
    ContextName.COMPLEX: 30
}


@dataclass(frozen=True)
class GeneratorConstants:
    """Параметры синтетических рядов (все в одном месте для перенастройки)"""
    base_period: int = 100
    second_period: int = 80
    jitter_sigma: float = 0.02
    oscillation_amplitude: float = 0.3
    oscillation_period: int = 10
    agent0_offset: float = 2.0
    agent1_offset: float = 4.0
    discrete_levels: int = 10
    mixed_scale: float = 0.5
    mixed_amplitude: float = 0.4
    mixed_period: int = 20

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class AgentDataset:
    """Локальный многомерный ряд агента: N значений по k_i признакам"""
    agent_id: str
    split: Split
    features: np.ndarray                 # (N, k_i)
    feature_names: Tuple[str, ...] = ()

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim == 1:
            features = features[:, np.newaxis]
        if features.ndim != 2:
            raise ShapeException(f"Агент {self.agent_id}: ряд должен иметь форму (N, k), получено {features.shape}")
        if not np.all(np.isfinite(features)):
            raise NumericException(f"Агент {self.agent_id} ({self.split.value}): нечисловые значения в ряде")
        object.__setattr__(self, 'features', features)
        if not self.feature_names:
            names = tuple(f"feature_{i}" for i in range(features.shape[1]))
            object.__setattr__(self, 'feature_names', names)
        if len(self.feature_names) != features.shape[1]:
            raise ShapeException(f"Агент {self.agent_id}: {len(self.feature_names)} имен на {features.shape[1]} признаков")

    @property
    def length(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def timestamps(self) -> np.ndarray:
        return np.arange(self.length)


# split -> agent_id -> ряд
ContextDatasets = Dict[Split, Dict[str, AgentDataset]]


@dataclass(frozen=True)
class ContextSpec:
    """Описание генерируемого контекста: seed полностью определяет все ряды"""
    name: ContextName
    seed: int
    n_train: int = 1000
    n_test: int = 200
    misleading_count: int = 2

    def __post_init__(self):
        if self.n_train < 1 or self.n_test < 1:
            raise ConfigurationException(f"Размеры выборок должны быть положительными: {self.n_train}, {self.n_test}")
        if self.misleading_count < 1:
            raise ConfigurationException(f"misleading_count={self.misleading_count} должен быть >= 1")
