"""
Детерминированные генераторы экспериментальных контекстов.

Базовый сигнал - повторяющийся цикл: линейный подъем 0 -> 1 на первой
четверти периода, плато на 1, спуск 1 -> 0 на последней четверти.
Гауссов шум добавляется один раз к каждому базовому сигналу: агенты, построенные
на одном сигнале, видят одну и ту же его зашумленную реализацию.
Тестовая выборка отличается от обучающей только сдвигом фазы.
"""
from typing import Dict, Optional, Tuple

import numpy as np

from osmolearn.core.core_exceptions import PreconditionException
from osmolearn.core.core_logger import get_logger
from osmolearn.datagen.datagen_types import (
    AgentDataset, ContextDatasets, ContextName, ContextSpec, GeneratorConstants, Split
)
from osmolearn.numerics.numerics_random import RngStream

logger = get_logger(__name__)

DEFAULT_CONSTANTS = GeneratorConstants()


def ramp_plateau(steps: np.ndarray, period: int) -> Tuple[np.ndarray, np.ndarray]:
    """Значения цикла подъем-плато-спуск и маска шагов плато"""
    if period < 8:
        raise PreconditionException(f"Период {period} слишком мал для цикла подъем-плато-спуск")
    phase = np.mod(steps, period)
    ramp = period // 4
    descent_start = period - ramp
    values = np.where(phase < ramp, phase / (ramp - 1),
                      np.where(phase < descent_start, 1.0, 1.0 - (phase - descent_start) / (ramp - 1)))
    plateau = (phase >= ramp) & (phase < descent_start)
    return values.astype(np.float64), plateau


def round_half_away(values: np.ndarray) -> np.ndarray:
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def _phase_offset(seed: int, split: Split, signal: str, period: int) -> int:
    if split is Split.TRAIN:
        return 0
    return RngStream(seed).spawn('phase', signal).integers(0, period)


def _steps(seed: int, split: Split, n: int, signal: str, period: int) -> np.ndarray:
    return np.arange(n, dtype=np.float64) + _phase_offset(seed, split, signal, period)


def _sizes(n_train: int, n_test: int) -> Dict[Split, int]:
    if n_train < 1 or n_test < 1:
        raise PreconditionException(f"Размеры выборок должны быть положительными: {n_train}, {n_test}")
    return {Split.TRAIN: n_train, Split.TEST: n_test}


def gen_simple(seed: int, n_train: int = 1000, n_test: int = 200,
               constants: GeneratorConstants = DEFAULT_CONSTANTS) -> ContextDatasets:
    """Простой контекст: Agent_1 - базовый сигнал, Agent_0 - он же с колебаниями на плато"""
    result: ContextDatasets = {}
    for split, n in _sizes(n_train, n_test).items():
        steps = _steps(seed, split, n, 'base', constants.base_period)
        base, plateau = ramp_plateau(steps, constants.base_period)
        rng = RngStream(seed).spawn('simple', split.value)

        oscillation = constants.oscillation_amplitude * np.sin(2.0 * np.pi * steps / constants.oscillation_period)
        signal = base + rng.spawn('jitter').normal(0.0, constants.jitter_sigma, n)
        agent_0 = signal + oscillation * plateau
        agent_1 = signal
        result[split] = {
            '0': AgentDataset(agent_id='0', split=split, features=agent_0),
            '1': AgentDataset(agent_id='1', split=split, features=agent_1)
        }
    return result


def gen_misleading(seed: int, count: int, n_train: int = 1000, n_test: int = 200) -> ContextDatasets:
    """Вводящие в заблуждение агенты M0..M{count-1}: независимый шум N(0, 1)"""
    if count < 1:
        raise PreconditionException(f"gen_misleading: count={count} должен быть >= 1")
    result: ContextDatasets = {}
    for split, n in _sizes(n_train, n_test).items():
        rng = RngStream(seed).spawn('misleading', split.value)
        result[split] = {}
        for i in range(count):
            agent_id = f"M{i}"
            result[split][agent_id] = AgentDataset(agent_id=agent_id, split=split,
                                                   features=rng.spawn(agent_id).normal(0.0, 1.0, n))
    return result


def gen_complex(seed: int, n_train: int = 1000, n_test: int = 200,
                constants: GeneratorConstants = DEFAULT_CONSTANTS) -> ContextDatasets:
    """Сложный контекст из двух подконтекстов: {0, 1} со смещениями и {2, 3, 4} на втором сигнале"""
    simple = gen_simple(seed, n_train, n_test, constants)
    result: ContextDatasets = {}
    for split, n in _sizes(n_train, n_test).items():
        steps = _steps(seed, split, n, 'second', constants.second_period)
        second, _ = ramp_plateau(steps, constants.second_period)
        rng = RngStream(seed).spawn('second', split.value)

        signal = second + rng.spawn('jitter').normal(0.0, constants.jitter_sigma, n)

        agent_2 = signal
        agent_3 = 1.0 - signal
        discrete = round_half_away(constants.discrete_levels * np.clip(signal, 0.0, 1.0))
        mixed = (constants.mixed_scale * signal
                 + constants.mixed_amplitude * np.sin(2.0 * np.pi * steps / constants.mixed_period))

        result[split] = {
            '0': AgentDataset(agent_id='0', split=split,
                              features=simple[split]['0'].features + constants.agent0_offset),
            '1': AgentDataset(agent_id='1', split=split,
                              features=simple[split]['1'].features + constants.agent1_offset),
            '2': AgentDataset(agent_id='2', split=split, features=agent_2),
            '3': AgentDataset(agent_id='3', split=split, features=agent_3),
            '4': AgentDataset(agent_id='4', split=split, features=np.column_stack([discrete, mixed]))
        }
    return result


def gen_context(spec: ContextSpec, constants: Optional[GeneratorConstants] = None) -> ContextDatasets:
    """Генерация контекста по его описанию"""
    constants = constants or DEFAULT_CONSTANTS
    if spec.name is ContextName.SIMPLE:
        datasets = gen_simple(spec.seed, spec.n_train, spec.n_test, constants)
    elif spec.name is ContextName.MISLEADING:
        datasets = gen_simple(spec.seed, spec.n_train, spec.n_test, constants)
        misleading = gen_misleading(spec.seed, spec.misleading_count, spec.n_train, spec.n_test)
        for split in datasets:
            datasets[split].update(misleading[split])
    else:
        datasets = gen_complex(spec.seed, spec.n_train, spec.n_test, constants)

    logger.info(f"✅ Сгенерирован контекст '{spec.name.value}' (seed={spec.seed}): "
                f"агенты {sorted(datasets[Split.TRAIN])}, N={spec.n_train}/{spec.n_test}")
    return datasets
