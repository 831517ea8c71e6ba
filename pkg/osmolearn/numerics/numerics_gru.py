"""
GRU с явными прямым и обратным проходами.

Формулировка с двумя смещениями на вентиль:
    r_t = sigma(W_ir x_t + b_ir + W_hr h_{t-1} + b_hr)
    z_t = sigma(W_iz x_t + b_iz + W_hz h_{t-1} + b_hz)
    n_t = tanh(W_in x_t + b_in + r_t * (W_hn h_{t-1} + b_hn))
    h_t = (1 - z_t) * n_t + z_t * h_{t-1}

Число параметров: 3*in*hidden + 3*hidden^2 + 6*hidden (при hidden=20: 60*in + 1320).
Вход принимается как одна последовательность (L, in) или пакет (B, L, in);
пакет обрабатывается построчно-независимо.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from osmolearn.core.core_exceptions import ContractException, ShapeException
from osmolearn.numerics.numerics_types import GruParams, check_finite, check_shape


def sigmoid(a: np.ndarray) -> np.ndarray:
    # Эквивалентно 1/(1+exp(-a)), без переполнения при больших |a|
    return 0.5 * (1.0 + np.tanh(0.5 * a))


@dataclass(eq=False)
class GruCache:
    """Активации прямого прохода, необходимые для обратного"""
    params: GruParams
    x: np.ndarray        # (B, L, in)
    hs: np.ndarray       # (B, L+1, hidden), hs[:, 0] = h0
    r: np.ndarray        # (B, L, hidden)
    z: np.ndarray
    n: np.ndarray
    hn: np.ndarray       # W_hn h_{t-1} + b_hn
    single: bool         # вход был одной последовательностью (L, in)
    consumed: bool = False


def gru_forward(inputs: np.ndarray, h0: Optional[np.ndarray], params: GruParams) -> Tuple[np.ndarray, GruCache]:
    """Прямой проход: возвращает все скрытые состояния h_1..h_L и кэш"""
    x = np.asarray(inputs, dtype=np.float64)
    single = x.ndim == 2
    if single:
        x = x[np.newaxis]
    if x.ndim != 3:
        raise ShapeException(f"Операнд 'inputs': ожидалась форма (L, in) или (B, L, in), получена {np.shape(inputs)}")
    batch, length, width = x.shape
    if length < 1:
        raise ShapeException("Операнд 'inputs': последовательность должна содержать хотя бы один шаг")
    if width != params.input_size:
        raise ShapeException(f"Операнд 'inputs': ширина признаков {width} не совпадает с входом GRU {params.input_size}")
    check_finite('inputs', x)

    hidden = params.hidden_size
    if h0 is None:
        h = np.zeros((batch, hidden))
    else:
        h = np.asarray(h0, dtype=np.float64)
        if single and h.ndim == 1:
            h = h[np.newaxis]
        check_shape('h0', h, (batch, hidden))

    hs = np.empty((batch, length + 1, hidden))
    hs[:, 0] = h
    r_all = np.empty((batch, length, hidden))
    z_all = np.empty_like(r_all)
    n_all = np.empty_like(r_all)
    hn_all = np.empty_like(r_all)

    # Входные проекции считаются сразу для всех шагов
    xr = x @ params.w_ir.T + params.b_ir
    xz = x @ params.w_iz.T + params.b_iz
    xn = x @ params.w_in.T + params.b_in

    for t in range(length):
        r = sigmoid(xr[:, t] + h @ params.w_hr.T + params.b_hr)
        z = sigmoid(xz[:, t] + h @ params.w_hz.T + params.b_hz)
        hn = h @ params.w_hn.T + params.b_hn
        n = np.tanh(xn[:, t] + r * hn)
        h = (1.0 - z) * n + z * h
        r_all[:, t], z_all[:, t], n_all[:, t], hn_all[:, t] = r, z, n, hn
        hs[:, t + 1] = h

    check_finite('gru.hidden_states', hs)
    cache = GruCache(params=params, x=x, hs=hs, r=r_all, z=z_all, n=n_all, hn=hn_all, single=single)
    states = hs[:, 1:]
    return (states[0] if single else states), cache


def gru_backward(cache: GruCache, d_hL: np.ndarray) -> Tuple[GruParams, np.ndarray]:
    """Обратный проход (BPTT) от градиента по последнему скрытому состоянию h_L"""
    if not isinstance(cache, GruCache):
        raise ContractException("gru_backward: ожидался кэш gru_forward")
    if cache.consumed:
        raise ContractException("gru_backward: кэш уже использован (устаревший кэш)")

    params = cache.params
    batch, length, _ = cache.x.shape
    hidden = params.hidden_size
    dh = np.asarray(d_hL, dtype=np.float64)
    if cache.single and dh.ndim == 1:
        dh = dh[np.newaxis]
    if dh.shape != (batch, hidden):
        raise ContractException(f"gru_backward: градиент d_hL формы {np.shape(d_hL)} не соответствует кэшу {(batch, hidden)}")
    check_finite('d_hL', dh)

    grads = {name: np.zeros_like(arr) for name, arr in params.blocks().items()}
    dx = np.zeros_like(cache.x)

    for t in reversed(range(length)):
        h_prev = cache.hs[:, t]
        x_t = cache.x[:, t]
        r, z, n, hn = cache.r[:, t], cache.z[:, t], cache.n[:, t], cache.hn[:, t]

        dn = dh * (1.0 - z)
        dz = dh * (h_prev - n)
        dh_prev = dh * z

        da_n = dn * (1.0 - n * n)
        dr = da_n * hn
        dhn = da_n * r
        da_z = dz * z * (1.0 - z)
        da_r = dr * r * (1.0 - r)

        grads['w_in'] += da_n.T @ x_t
        grads['b_in'] += da_n.sum(axis=0)
        grads['w_hn'] += dhn.T @ h_prev
        grads['b_hn'] += dhn.sum(axis=0)

        grads['w_iz'] += da_z.T @ x_t
        grads['b_iz'] += da_z.sum(axis=0)
        grads['w_hz'] += da_z.T @ h_prev
        grads['b_hz'] += da_z.sum(axis=0)

        grads['w_ir'] += da_r.T @ x_t
        grads['b_ir'] += da_r.sum(axis=0)
        grads['w_hr'] += da_r.T @ h_prev
        grads['b_hr'] += da_r.sum(axis=0)

        dx[:, t] = da_n @ params.w_in + da_z @ params.w_iz + da_r @ params.w_ir
        dh = dh_prev + dhn @ params.w_hn + da_z @ params.w_hz + da_r @ params.w_hr

    cache.consumed = True
    for name, arr in grads.items():
        check_finite(f"d_gru.{name}", arr)
    return GruParams.from_blocks(grads), (dx[0] if cache.single else dx)
