from typing import Tuple

import numpy as np

from osmolearn.core.core_exceptions import NumericException
from osmolearn.losses.losses_alignment import align_loss
from osmolearn.losses.losses_preservation import pres_loss
from osmolearn.losses.losses_types import LossConfig
from osmolearn.model.model_types import ContextBatch, EmbeddingBatch


def total_loss(e_batch: EmbeddingBatch, ctx_batch: ContextBatch, cfg: LossConfig) -> Tuple[float, np.ndarray]:
    """L_total = lambda * L_align + (1 - lambda) * L_pres с линейно объединенными градиентами"""
    align_value, align_grad = align_loss(e_batch, ctx_batch, cfg.distance)
    if cfg.lambda_ == 1.0:
        # L_pres с нулевым весом не вычисляется: допускает пакеты из одного окна
        value, grad = align_value, align_grad
    else:
        pres_value, pres_grad = pres_loss(e_batch, cfg.temperature, cfg.similarity)
        value = cfg.lambda_ * align_value + (1.0 - cfg.lambda_) * pres_value
        grad = cfg.lambda_ * align_grad + (1.0 - cfg.lambda_) * pres_grad

    if not np.isfinite(value) or not np.all(np.isfinite(grad)):
        raise NumericException(f"total_loss: нечисловое значение потерь у агента {e_batch.agent_id}")
    return float(value), grad
