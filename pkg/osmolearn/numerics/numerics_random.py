import zlib
from typing import Tuple, Union

import numpy as np

from osmolearn.core.core_exceptions import PreconditionException

Key = Union[int, str]


def _key_to_int(key: Key) -> int:
    """Стабильное (не зависящее от PYTHONHASHSEED) преобразование ключа в число"""
    if isinstance(key, str):
        return zlib.crc32(key.encode('utf-8'))
    return int(key)


class RngStream:
    """Детерминированный поток случайных чисел с именованными подпотоками.

    Один и тот же seed и путь подпотока дают одну и ту же последовательность
    на любой платформе (PCG64 + SeedSequence).
    """

    def __init__(self, seed: int, path: Tuple[int, ...] = ()):
        if not 0 <= int(seed) < 2 ** 64:
            raise PreconditionException(f"seed должен быть 64-битным неотрицательным числом, получен {seed}")
        self.seed = int(seed)
        self.path = tuple(path)
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.path)
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    def spawn(self, *keys: Key) -> 'RngStream':
        """Независимый подпоток для заданного пути ключей"""
        return RngStream(self.seed, self.path + tuple(_key_to_int(k) for k in keys))

    def uniform(self, low: float, high: float, size) -> np.ndarray:
        return self._generator.uniform(low, high, size)

    def normal(self, loc: float, scale: float, size) -> np.ndarray:
        return self._generator.normal(loc, scale, size)

    def integers(self, low: int, high: int) -> int:
        return int(self._generator.integers(low, high))

    def choice(self, n: int, size: int, replace: bool = False) -> np.ndarray:
        if not replace and size > n:
            raise PreconditionException(f"Нельзя выбрать {size} индексов без повторов из {n}")
        return self._generator.choice(n, size=size, replace=replace)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, path={self.path})"
