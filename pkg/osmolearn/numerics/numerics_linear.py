from dataclasses import dataclass
from typing import Tuple

import numpy as np

from osmolearn.core.core_exceptions import ContractException, ShapeException
from osmolearn.numerics.numerics_types import LinearParams, check_finite


@dataclass(eq=False)
class LinearCache:
    """Вход линейного слоя для обратного прохода"""
    params: LinearParams
    x: np.ndarray        # (B, in)
    single: bool
    consumed: bool = False


def linear_forward(x: np.ndarray, params: LinearParams) -> Tuple[np.ndarray, LinearCache]:
    """y = W x + b для вектора (in,) или пакета (B, in)"""
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr[np.newaxis]
    if arr.ndim != 2 or arr.shape[1] != params.in_features:
        raise ShapeException(f"Операнд 'x': ожидалась ширина {params.in_features}, получена форма {np.shape(x)}")
    check_finite('x', arr)
    y = arr @ params.weight.T + params.bias
    check_finite('linear.output', y)
    cache = LinearCache(params=params, x=arr, single=single)
    return (y[0] if single else y), cache


def linear_backward(cache: LinearCache, d_out: np.ndarray) -> Tuple[LinearParams, np.ndarray]:
    """Точные градиенты по W, b и входу x"""
    if not isinstance(cache, LinearCache):
        raise ContractException("linear_backward: ожидался кэш linear_forward")
    if cache.consumed:
        raise ContractException("linear_backward: кэш уже использован (устаревший кэш)")
    dy = np.asarray(d_out, dtype=np.float64)
    if cache.single and dy.ndim == 1:
        dy = dy[np.newaxis]
    expected = (cache.x.shape[0], cache.params.out_features)
    if dy.shape != expected:
        raise ShapeException(f"Операнд 'd_out': ожидалась форма {expected}, получена {np.shape(d_out)}")
    check_finite('d_out', dy)

    d_weight = dy.T @ cache.x
    d_bias = dy.sum(axis=0)
    dx = dy @ cache.params.weight
    cache.consumed = True
    return LinearParams(weight=d_weight, bias=d_bias), (dx[0] if cache.single else dx)
