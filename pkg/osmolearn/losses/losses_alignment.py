from typing import Tuple

import numpy as np

from osmolearn.core.core_exceptions import ContractException, ShapeException
from osmolearn.losses.losses_types import LossDistance
from osmolearn.model.model_types import ContextBatch, EmbeddingBatch


def align_loss(e_batch: EmbeddingBatch, ctx_batch: ContextBatch,
               distance: LossDistance = LossDistance.SQUARED_ERROR_MEAN) -> Tuple[float, np.ndarray]:
    """L_align: среднее по пакету MSE между локальным и контекстным эмбеддингом.

    Контекст - константа (градиент в диффузор не передается).
    """
    if e_batch.size != ctx_batch.size or not np.array_equal(e_batch.indices, ctx_batch.indices):
        raise ContractException(f"align_loss: индексы агента {e_batch.agent_id} и контекста "
                                f"{ctx_batch.group_id} не совпадают")
    if e_batch.embeddings.shape != ctx_batch.embeddings.shape:
        raise ShapeException(f"align_loss: формы {e_batch.embeddings.shape} и {ctx_batch.embeddings.shape} различаются")
    if distance is not LossDistance.SQUARED_ERROR_MEAN:
        raise ContractException(f"align_loss: расстояние {distance} не поддерживается")

    diff = e_batch.embeddings - ctx_batch.embeddings
    loss = float(np.mean(diff * diff))
    grad = 2.0 * diff / diff.size
    return loss, grad
