from dataclasses import replace
from typing import Optional, Tuple

from osmolearn.core.core_exceptions import BarrierException, ContractException
from osmolearn.core.core_logger import get_logger
from osmolearn.diffuser.diffuser_types import ContextBroadcast
from osmolearn.losses.losses_total import total_loss
from osmolearn.losses.losses_types import LossConfig
from osmolearn.model.model_encoder import EncodeCache, apply_update, encode, encode_backward
from osmolearn.model.model_types import AgentModel, EmbeddingBatch, WindowBatch

logger = get_logger(__name__)


def effective_loss_config(cfg: LossConfig, batch_size: int) -> LossConfig:
    """Пакет из одного окна обучается только на выравнивании"""
    if batch_size < 2 and cfg.lambda_ != 1.0:
        return replace(cfg, lambda_=1.0)
    return cfg


class AgentWorker:
    """Агент: локальная модель и счетчик шагов между двумя барьерами"""

    def __init__(self, model: AgentModel, loss_config: LossConfig, lr: float):
        self.agent_id = model.agent_id
        self.model = model
        self.loss_config = loss_config
        self.lr = lr

        # Счетчик завершенных шагов обучения
        self.step = 0
        self._pending: Optional[Tuple[EmbeddingBatch, EncodeCache]] = None

    def forward(self, step: int, batch: WindowBatch) -> EmbeddingBatch:
        """Кодирование пакета шага step без обновления параметров"""
        if self._pending is not None:
            raise ContractException(f"Агент {self.agent_id}: шаг {self.step} не завершен, новый forward недопустим")
        if step != self.step:
            raise BarrierException(f"Агент {self.agent_id}: ожидался шаг {self.step}, получен {step}")
        embeddings, cache = encode(self.model, batch)
        self._pending = (embeddings, cache)
        return embeddings

    def receive(self, broadcast: ContextBroadcast) -> float:
        """Потери по контексту группы, обратный проход и один шаг Adam"""
        if self._pending is None:
            raise BarrierException(f"Агент {self.agent_id}: рассылка шага {broadcast.step} до отправки эмбеддингов")
        if broadcast.step != self.step:
            raise BarrierException(f"Агент {self.agent_id}: рассылка шага {broadcast.step}, ожидался шаг {self.step}")

        embeddings, cache = self._pending
        context = broadcast.for_agent(self.agent_id)
        loss, d_embeddings = total_loss(embeddings, context, effective_loss_config(self.loss_config, embeddings.size))
        grads = encode_backward(self.model, cache, d_embeddings)
        self.model = apply_update(self.model, grads, self.lr)

        self._pending = None
        self.step += 1
        return loss

    def embed(self, batch: WindowBatch) -> EmbeddingBatch:
        """Только прямой проход (оценка и выборки для кластеризации)"""
        embeddings, _ = encode(self.model, batch)
        return embeddings
