from typing import Dict, Optional, Tuple

import numpy as np

from osmolearn.core.core_exceptions import NumericException, PreconditionException, ShapeException
from osmolearn.numerics.numerics_types import AdamState
from osmolearn.settings import get_setting


def adam_defaults() -> Tuple[float, float, float]:
    """beta1, beta2, eps из настроек"""
    return (float(get_setting('ADAM_BETA1', 0.9)),
            float(get_setting('ADAM_BETA2', 0.999)),
            float(get_setting('ADAM_EPS', 1e-8)))


def adam_step(params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray], state: AdamState, lr: float,
              beta1: Optional[float] = None, beta2: Optional[float] = None,
              eps: Optional[float] = None) -> Tuple[Dict[str, np.ndarray], AdamState]:
    """Один шаг Adam с коррекцией смещения моментов.

    Возвращает новые параметры и новое состояние; входные массивы не изменяются.
    """
    default_beta1, default_beta2, default_eps = adam_defaults()
    beta1 = default_beta1 if beta1 is None else beta1
    beta2 = default_beta2 if beta2 is None else beta2
    eps = default_eps if eps is None else eps

    if not (0.0 <= beta1 < 1.0 and 0.0 <= beta2 < 1.0):
        raise PreconditionException(f"adam_step: beta1={beta1}, beta2={beta2} должны лежать в [0, 1)")
    if eps <= 0.0:
        raise PreconditionException(f"adam_step: eps={eps} должен быть положительным")
    if set(params) != set(grads):
        raise ShapeException(f"adam_step: блоки параметров {sorted(params)} и градиентов {sorted(grads)} различаются")

    for name in params:
        if np.shape(grads[name]) != np.shape(params[name]):
            raise ShapeException(f"adam_step: блок '{name}' имеет форму {np.shape(params[name])}, "
                                 f"градиент {np.shape(grads[name])}")
        if not np.all(np.isfinite(grads[name])):
            raise NumericException(f"adam_step: нечисловой градиент в блоке '{name}'")

    t = state.t + 1
    bias1 = 1.0 - beta1 ** t
    bias2 = 1.0 - beta2 ** t

    new_params, new_m, new_v = {}, {}, {}
    for name, value in params.items():
        g = np.asarray(grads[name], dtype=np.float64)
        m_prev = state.m.get(name)
        v_prev = state.v.get(name)
        if m_prev is None:
            m_prev = np.zeros_like(g)
            v_prev = np.zeros_like(g)
        m = beta1 * m_prev + (1.0 - beta1) * g
        v = beta2 * v_prev + (1.0 - beta2) * (g * g)
        m_hat = m / bias1
        v_hat = v / bias2
        new_params[name] = np.asarray(value, dtype=np.float64) - lr * m_hat / (np.sqrt(v_hat) + eps)
        new_m[name] = m
        new_v[name] = v

    return new_params, AdamState(m=new_m, v=new_v, t=t)
