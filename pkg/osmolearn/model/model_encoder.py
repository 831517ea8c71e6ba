from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from osmolearn.core.core_exceptions import ContractException, ShapeException
from osmolearn.model.model_types import AgentModel, EmbeddingBatch, WindowBatch
from osmolearn.numerics.numerics_adam import adam_step
from osmolearn.numerics.numerics_gru import GruCache, gru_backward, gru_forward
from osmolearn.numerics.numerics_linear import LinearCache, linear_backward, linear_forward


@dataclass(eq=False)
class EncodeCache:
    """Кэш кодировщика: модель, по которой он построен, и кэши слоев"""
    model: AgentModel
    gru_cache: GruCache
    linear_cache: LinearCache
    indices: np.ndarray


def encode(model: AgentModel, batch: WindowBatch) -> Tuple[EmbeddingBatch, EncodeCache]:
    """e_i^(t) = h(g_i(X_i^(t))): GRU от h0=0 по каждому окну, затем проекция h_L"""
    if batch.agent_id != model.agent_id:
        raise ContractException(f"encode: пакет агента {batch.agent_id} передан модели агента {model.agent_id}")
    if batch.n_features != model.n_features:
        raise ShapeException(f"encode: агент {model.agent_id} ожидает {model.n_features} признаков, "
                             f"получено {batch.n_features}")

    states, gru_cache = gru_forward(batch.windows, None, model.gru)
    embeddings, linear_cache = linear_forward(states[:, -1], model.proj)
    cache = EncodeCache(model=model, gru_cache=gru_cache, linear_cache=linear_cache, indices=batch.indices)
    return EmbeddingBatch(agent_id=model.agent_id, embeddings=embeddings, indices=batch.indices), cache


def encode_backward(model: AgentModel, cache: EncodeCache, d_embeddings: np.ndarray) -> Dict[str, np.ndarray]:
    """Градиенты по всем блокам модели, суммированные по пакету"""
    if not isinstance(cache, EncodeCache) or cache.model is not model:
        raise ContractException(f"encode_backward: кэш не относится к текущей модели агента {model.agent_id}")
    d_embeddings = np.asarray(d_embeddings, dtype=np.float64)
    expected = (cache.indices.shape[0], model.embedding_size)
    if d_embeddings.shape != expected:
        raise ContractException(f"encode_backward: градиент формы {d_embeddings.shape}, ожидалась {expected}")

    d_proj, d_hidden = linear_backward(cache.linear_cache, d_embeddings)
    d_gru, _ = gru_backward(cache.gru_cache, d_hidden)

    grads = {f"gru.{name}": arr for name, arr in d_gru.blocks().items()}
    grads.update({f"proj.{name}": arr for name, arr in d_proj.blocks().items()})
    return grads


def apply_update(model: AgentModel, grads: Dict[str, np.ndarray], lr: float,
                 beta1: Optional[float] = None, beta2: Optional[float] = None,
                 eps: Optional[float] = None) -> AgentModel:
    """w_i <- Adam(w_i, grad): один шаг оптимизатора по всем блокам"""
    new_blocks, new_state = adam_step(model.blocks(), grads, model.optimizer_state, lr,
                                      beta1=beta1, beta2=beta2, eps=eps)
    return model.with_blocks(new_blocks, new_state)
