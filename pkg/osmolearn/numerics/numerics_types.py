"""
Типы численного ядра: матрицы, параметры GRU и линейного слоя, состояние Adam.

Все массивы хранятся в float64 (numpy.ndarray, row-major). Параметры считаются
значениями: операции обновления возвращают новые объекты и не изменяют
переданные массивы.
"""
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from osmolearn.core.core_exceptions import NumericException, ShapeException
from osmolearn.settings import get_setting

# Плотная матрица float64 в порядке row-major
Mat = np.ndarray

GRU_WEIGHT_BLOCKS = ('w_ir', 'w_iz', 'w_in', 'w_hr', 'w_hz', 'w_hn')
GRU_BIAS_BLOCKS = ('b_ir', 'b_iz', 'b_in', 'b_hr', 'b_hz', 'b_hn')
GRU_BLOCKS = GRU_WEIGHT_BLOCKS + GRU_BIAS_BLOCKS
LINEAR_BLOCKS = ('weight', 'bias')


def check_finite(name: str, arr: np.ndarray):
    """Проверка отсутствия NaN/Inf (отключается настройкой CHECK_FINITE)"""
    if get_setting('CHECK_FINITE', True) and not np.all(np.isfinite(arr)):
        raise NumericException(f"Нечисловые значения в '{name}'")


def check_shape(name: str, arr: np.ndarray, expected: Tuple[int, ...]):
    """Проверка формы операнда"""
    if arr.shape != tuple(expected):
        raise ShapeException(f"Операнд '{name}': ожидалась форма {tuple(expected)}, получена {arr.shape}")


@dataclass(frozen=True, eq=False)
class GruParams:
    """Параметры GRU: для каждого вентиля (reset, update, candidate) W_i, W_h, b_i, b_h"""
    w_ir: Mat
    w_iz: Mat
    w_in: Mat
    w_hr: Mat
    w_hz: Mat
    w_hn: Mat
    b_ir: np.ndarray
    b_iz: np.ndarray
    b_in: np.ndarray
    b_hr: np.ndarray
    b_hz: np.ndarray
    b_hn: np.ndarray

    def __post_init__(self):
        for name in GRU_BLOCKS:
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        if self.w_ir.ndim != 2:
            raise ShapeException(f"Операнд 'gru.w_ir': ожидалась матрица, получена форма {self.w_ir.shape}")
        hidden, inputs = self.w_ir.shape
        for name in ('w_ir', 'w_iz', 'w_in'):
            check_shape(f"gru.{name}", getattr(self, name), (hidden, inputs))
        for name in ('w_hr', 'w_hz', 'w_hn'):
            check_shape(f"gru.{name}", getattr(self, name), (hidden, hidden))
        for name in GRU_BIAS_BLOCKS:
            check_shape(f"gru.{name}", getattr(self, name), (hidden,))

    @property
    def input_size(self) -> int:
        return self.w_ir.shape[1]

    @property
    def hidden_size(self) -> int:
        return self.w_ir.shape[0]

    def param_count(self) -> int:
        return sum(getattr(self, name).size for name in GRU_BLOCKS)

    def blocks(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in GRU_BLOCKS}

    @classmethod
    def from_blocks(cls, blocks: Dict[str, np.ndarray]) -> 'GruParams':
        return cls(**{name: blocks[name] for name in GRU_BLOCKS})

    @classmethod
    def zeros(cls, input_size: int, hidden_size: int) -> 'GruParams':
        blocks = {}
        for name in GRU_WEIGHT_BLOCKS:
            cols = input_size if name.startswith('w_i') else hidden_size
            blocks[name] = np.zeros((hidden_size, cols))
        for name in GRU_BIAS_BLOCKS:
            blocks[name] = np.zeros(hidden_size)
        return cls.from_blocks(blocks)

    @classmethod
    def initialize(cls, input_size: int, hidden_size: int, rng) -> 'GruParams':
        """Равномерная инициализация в [-1/sqrt(hidden), 1/sqrt(hidden)]"""
        bound = 1.0 / np.sqrt(hidden_size)
        blocks = {}
        for name in GRU_WEIGHT_BLOCKS:
            cols = input_size if name.startswith('w_i') else hidden_size
            blocks[name] = rng.uniform(-bound, bound, (hidden_size, cols))
        for name in GRU_BIAS_BLOCKS:
            blocks[name] = rng.uniform(-bound, bound, (hidden_size,))
        return cls.from_blocks(blocks)


@dataclass(frozen=True, eq=False)
class LinearParams:
    """Параметры линейного слоя y = W x + b"""
    weight: Mat
    bias: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'weight', np.asarray(self.weight, dtype=np.float64))
        object.__setattr__(self, 'bias', np.asarray(self.bias, dtype=np.float64))
        if self.weight.ndim != 2:
            raise ShapeException(f"Операнд 'linear.weight': ожидалась матрица, получена форма {self.weight.shape}")
        check_shape('linear.bias', self.bias, (self.weight.shape[0],))

    @property
    def in_features(self) -> int:
        return self.weight.shape[1]

    @property
    def out_features(self) -> int:
        return self.weight.shape[0]

    def param_count(self) -> int:
        return self.weight.size + self.bias.size

    def blocks(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in LINEAR_BLOCKS}

    @classmethod
    def from_blocks(cls, blocks: Dict[str, np.ndarray]) -> 'LinearParams':
        return cls(weight=blocks['weight'], bias=blocks['bias'])

    @classmethod
    def zeros(cls, in_features: int, out_features: int) -> 'LinearParams':
        return cls(weight=np.zeros((out_features, in_features)), bias=np.zeros(out_features))

    @classmethod
    def initialize(cls, in_features: int, out_features: int, rng) -> 'LinearParams':
        bound = 1.0 / np.sqrt(in_features)
        return cls(weight=rng.uniform(-bound, bound, (out_features, in_features)),
                   bias=rng.uniform(-bound, bound, (out_features,)))


@dataclass(frozen=True, eq=False)
class AdamState:
    """Состояние Adam: моменты m, v той же формы, что и параметры, и счетчик шагов t"""
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)
    t: int = 0

    @classmethod
    def zeros_like(cls, blocks: Dict[str, np.ndarray]) -> 'AdamState':
        return cls(m={name: np.zeros_like(arr, dtype=np.float64) for name, arr in blocks.items()},
                   v={name: np.zeros_like(arr, dtype=np.float64) for name, arr in blocks.items()},
                   t=0)
