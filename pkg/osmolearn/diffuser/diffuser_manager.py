from typing import Dict, List, Mapping, Optional

import numpy as np

from osmolearn.core.core_exceptions import BarrierException
from osmolearn.core.core_logger import get_logger
from osmolearn.diffuser.diffuser_clustering import cluster_agents, partition_schedule
from osmolearn.diffuser.diffuser_osmotic import step_broadcast
from osmolearn.diffuser.diffuser_trace import ClusterTrace
from osmolearn.diffuser.diffuser_types import ContextBroadcast, OsmoticStrategy, SubContextPartition
from osmolearn.model.model_types import EmbeddingBatch
from osmolearn.numerics.numerics_random import RngStream

logger = get_logger(__name__)


class Diffuser:
    """Диффузор: барьер агрегации, синтез контекста и управление подконтекстами"""

    def __init__(self, agent_ids: List[str], rng: RngStream, tau: float, beta: float,
                 sample_size: int, period: int, strategy: OsmoticStrategy = OsmoticStrategy.MEAN,
                 trace: Optional[ClusterTrace] = None):
        self.agent_ids = sorted(agent_ids)
        self.rng = rng
        self.strategy = strategy
        self.trace = trace

        self.settings = {
            'tau': tau,
            'beta': beta,
            'sample_size': sample_size,
            'period': period
        }

        # Начальная гипотеза: единый глобальный контекст
        self.partition = SubContextPartition.global_context(self.agent_ids)
        self.history: List[SubContextPartition] = []

        # Счетчик шагов барьера (монотонный на всем запуске)
        self.step = 0

        logger.info(f"Diffuser инициализирован: агентов {len(self.agent_ids)}, стратегия {strategy.value}, "
                    f"tau={tau}, beta={beta}, S={sample_size}, период {period}")

    def aggregate(self, step: int, submissions: Mapping[str, EmbeddingBatch]) -> ContextBroadcast:
        """Барьер шага: все агенты отправили пакет step, затем рассылка контекста"""
        if step != self.step:
            raise BarrierException(f"Диффузор ожидал шаг {self.step}, получен шаг {step}")
        missing = [agent_id for agent_id in self.agent_ids if agent_id not in submissions]
        if missing:
            raise BarrierException(f"Шаг {step}: нет эмбеддингов от агента {missing[0]}")

        broadcast = step_broadcast(submissions, self.partition, self.strategy, step=step)
        self.step += 1
        return broadcast

    def should_recluster(self, epoch: int) -> bool:
        return partition_schedule(epoch, self.settings['period'])

    def draw_sample_positions(self, n_windows: int, epoch: int) -> np.ndarray:
        """S общих позиций окон без повторов (отсортированы по времени)"""
        size = min(self.settings['sample_size'], n_windows)
        if size < self.settings['sample_size']:
            logger.warning(f"⚠️ Окон {n_windows} меньше размера выборки {self.settings['sample_size']}")
        return np.sort(self.rng.spawn('cluster', epoch).choice(n_windows, size))

    def recluster(self, epoch: int, samples: Mapping[str, EmbeddingBatch]) -> SubContextPartition:
        """Новое разбиение по выборкам эмбеддингов; запись в трассу"""
        partition = cluster_agents(samples, self.settings['tau'], self.settings['beta'], epoch=epoch)
        if partition.same_groups(self.partition):
            logger.debug(f"Эпоха {epoch}: разбиение не изменилось")
        else:
            logger.info(f"✅ Эпоха {epoch}: новое разбиение {partition.member_lists()}")
        self.partition = partition
        self.history.append(partition)
        if self.trace is not None:
            self.trace.append(partition)
        return partition

    def get_stats(self) -> Dict:
        return {
            'step': self.step,
            'groups': self.partition.member_lists(),
            'reclusterings': len(self.history),
            'strategy': self.strategy.value
        }
