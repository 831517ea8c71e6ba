from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict

from osmolearn.core.core_exceptions import ConfigurationException


class LossDistance(Enum):
    SQUARED_ERROR_MEAN = "squared-error-mean"


class PresSimilarity(Enum):
    """Сходство внутри контрастивной функции L_pres"""
    DOT = "dot"
    COSINE = "cosine"


@dataclass(frozen=True)
class LossConfig:
    """Параметры функции потерь: вес выравнивания lambda, температура, расстояние, сходство L_pres"""
    lambda_: float = 0.9
    temperature: float = 0.1
    distance: LossDistance = LossDistance.SQUARED_ERROR_MEAN
    similarity: PresSimilarity = PresSimilarity.DOT

    def __post_init__(self):
        if not 0.0 <= self.lambda_ <= 1.0:
            raise ConfigurationException(f"lambda={self.lambda_} должна лежать в [0, 1]")
        if self.temperature <= 0.0:
            raise ConfigurationException(f"temperature={self.temperature} должна быть положительной")
        if not isinstance(self.distance, LossDistance):
            raise ConfigurationException(f"Неизвестное расстояние: {self.distance}")
        if not isinstance(self.similarity, PresSimilarity):
            raise ConfigurationException(f"Неизвестное сходство L_pres: {self.similarity}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': self.lambda_,
            'temperature': self.temperature,
            'distance': self.distance.value,
            'similarity': self.similarity.value
        }
