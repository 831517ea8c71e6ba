from typing import Mapping

import networkx as nx
import numpy as np

from osmolearn.core.core_exceptions import ContractException, PreconditionException
from osmolearn.core.core_logger import get_logger
from osmolearn.diffuser.diffuser_types import SubContextPartition
from osmolearn.metrics.metrics_similarity import agent_similarity_matrix
from osmolearn.model.model_types import EmbeddingBatch

logger = get_logger(__name__)


def partition_schedule(epoch: int, period: int) -> bool:
    """Нужна ли перекластеризация после эпохи epoch"""
    if period < 1:
        raise PreconditionException(f"partition_schedule: период {period} должен быть >= 1")
    return epoch > 0 and epoch % period == 0


def cluster_agents(samples: Mapping[str, EmbeddingBatch], tau: float, beta: float,
                   epoch: int = 0) -> SubContextPartition:
    """Подконтексты как компоненты связности графа с ребрами score(i, j) >= tau.

    score(i, j) - среднее по S общим индексам сходства с усилением beta.
    """
    if not samples:
        raise PreconditionException("cluster_agents: нет выборок агентов")
    agent_ids = sorted(samples)
    reference = samples[agent_ids[0]].indices
    if reference.shape[0] < 1:
        raise PreconditionException("cluster_agents: выборка должна содержать хотя бы один индекс")
    for agent_id in agent_ids:
        if not np.array_equal(samples[agent_id].indices, reference):
            raise ContractException(f"cluster_agents: индексы выборки агента {agent_id} не совпадают с остальными")

    _, scores = agent_similarity_matrix({a: samples[a].embeddings for a in agent_ids}, beta)

    graph = nx.Graph()
    graph.add_nodes_from(agent_ids)
    for i, agent_i in enumerate(agent_ids):
        for j in range(i + 1, len(agent_ids)):
            if scores[i, j] >= tau:
                graph.add_edge(agent_i, agent_ids[j], score=float(scores[i, j]))

    groups = tuple(frozenset(component) for component in nx.connected_components(graph))
    partition = SubContextPartition(epoch=epoch, groups=groups, score_agents=tuple(agent_ids), scores=scores)
    logger.info(f"🔄 Эпоха {epoch}: подконтексты {partition.member_lists()} (tau={tau}, beta={beta})")
    return partition
