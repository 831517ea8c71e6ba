"""
Функция сохранения локальной информации (контрастивная, InfoNCE).

Якоря t = 0..B-2, позитивная пара - соседнее окно t+1, негативные - все j != t
в пакете. Сходство делится на температуру:
    L_pres = -(1/(B-1)) * sum_t log( exp(s_{t,t+1}) / sum_{j != t} exp(s_{t,j}) )
Минимизация L_pres максимизирует оценку взаимной информации (L_pres = -I).

Сходство по умолчанию - скалярное произведение исходных эмбеддингов: градиент
растет вместе с нормой так же, как градиент MSE выравнивания. Косинусный вариант
(на нормированных копиях) инвариантен к масштабу, но его градиент ~ 1/(|e| * T)
при малых нормах подавляет выравнивание.
"""
from typing import Tuple

import numpy as np

from osmolearn.core.core_exceptions import NumericException, PreconditionException
from osmolearn.losses.losses_types import PresSimilarity
from osmolearn.model.model_types import EmbeddingBatch


def pres_loss(e_batch: EmbeddingBatch, temperature: float,
              similarity: PresSimilarity = PresSimilarity.DOT) -> Tuple[float, np.ndarray]:
    """Значение L_pres и точный градиент по эмбеддингам (для cosine - через нормировку)"""
    embeddings = e_batch.embeddings
    batch = embeddings.shape[0]
    if batch < 2:
        raise PreconditionException(f"pres_loss: агенту {e_batch.agent_id} нужен пакет из >= 2 окон, получено {batch}")
    if temperature <= 0.0:
        raise PreconditionException(f"pres_loss: температура {temperature} должна быть положительной")

    if similarity is PresSimilarity.COSINE:
        norms = np.linalg.norm(embeddings, axis=1)
        if np.any(norms < np.finfo(np.float64).tiny):
            raise NumericException(f"pres_loss: нулевой эмбеддинг у агента {e_batch.agent_id}")
        units = embeddings / norms[:, np.newaxis]
    else:
        units = embeddings

    sims = units @ units.T / temperature
    anchors = batch - 1
    logits = sims[:anchors].copy()
    logits[np.arange(anchors), np.arange(anchors)] = -np.inf

    row_max = logits.max(axis=1, keepdims=True)
    weights = np.exp(logits - row_max)
    normalizer = weights.sum(axis=1)
    log_sum = row_max[:, 0] + np.log(normalizer)
    positives = sims[np.arange(anchors), np.arange(1, batch)]
    loss = float(np.mean(log_sum - positives))

    # dL/ds: softmax минус индикатор позитивной пары, усреднено по якорям
    d_sims = np.zeros((batch, batch))
    d_sims[:anchors] = weights / normalizer[:, np.newaxis]
    d_sims[np.arange(anchors), np.arange(1, batch)] -= 1.0
    d_sims /= anchors

    d_units = (d_sims + d_sims.T) @ units / temperature
    if similarity is not PresSimilarity.COSINE:
        return loss, d_units
    radial = np.sum(units * d_units, axis=1, keepdims=True)
    grad = (d_units - units * radial) / norms[:, np.newaxis]
    return loss, grad
