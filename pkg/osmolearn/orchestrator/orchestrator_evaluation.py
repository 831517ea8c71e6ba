"""
Оценка: прямой проход по всем окнам разбиения данных в хронологическом
порядке, точность и потери контекста. Параметры моделей не меняются.
"""
from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

import numpy as np

from osmolearn.core.core_exceptions import ContractException, UndefinedMetricException
from osmolearn.core.core_logger import get_logger
from osmolearn.datagen.datagen_types import AgentDataset, Split
from osmolearn.datagen.datagen_windows import check_alignment, sliding_windows
from osmolearn.diffuser.diffuser_osmotic import step_broadcast
from osmolearn.diffuser.diffuser_types import OsmoticStrategy, SubContextPartition
from osmolearn.losses.losses_total import total_loss
from osmolearn.losses.losses_types import LossConfig
from osmolearn.metrics.metrics_context import (
    context_accuracy, context_loss, embedding_spread, group_accuracies, group_key, group_losses
)
from osmolearn.metrics.metrics_similarity import agent_similarity_matrix
from osmolearn.metrics.metrics_types import GroupMetric, MetricRecord
from osmolearn.model.model_encoder import encode
from osmolearn.model.model_types import AgentModel
from osmolearn.orchestrator.orchestrator_agent import effective_loss_config

logger = get_logger(__name__)


@dataclass(eq=False)
class SplitEmbeddings:
    """Эмбеддинги и потери каждого агента на всех окнах разбиения"""
    embeddings: Dict[str, np.ndarray]      # agent_id -> (T, d)
    losses: Dict[str, np.ndarray]          # agent_id -> (T,)
    indices: np.ndarray


def embed_split(models: Mapping[str, AgentModel], datasets: Mapping[str, AgentDataset],
                partition: SubContextPartition, window: int, batch: int,
                loss_config: LossConfig, strategy: OsmoticStrategy = OsmoticStrategy.MEAN) -> SplitEmbeddings:
    """Прямой проход пакетами; каждое окно несет потери своего пакета"""
    agent_ids = sorted(models)
    if agent_ids != sorted(datasets) or agent_ids != partition.agents:
        raise ContractException(f"Агенты моделей {agent_ids}, данных {sorted(datasets)} "
                                f"и разбиения {partition.agents} не совпадают")
    check_alignment(datasets)
    batches = {agent_id: sliding_windows(datasets[agent_id], window, batch) for agent_id in agent_ids}

    embedded = {agent_id: [] for agent_id in agent_ids}
    losses = {agent_id: [] for agent_id in agent_ids}
    indices = []
    for position in range(len(batches[agent_ids[0]])):
        submissions = {agent_id: encode(models[agent_id], batches[agent_id][position])[0] for agent_id in agent_ids}
        broadcast = step_broadcast(submissions, partition, strategy, step=position)
        for agent_id in agent_ids:
            submission = submissions[agent_id]
            cfg = effective_loss_config(loss_config, submission.size)
            loss, _ = total_loss(submission, broadcast.for_agent(agent_id), cfg)
            embedded[agent_id].append(submission.embeddings)
            losses[agent_id].append(np.full(submission.size, loss))
        indices.append(submissions[agent_ids[0]].indices)

    return SplitEmbeddings(embeddings={a: np.concatenate(embedded[a]) for a in agent_ids},
                           losses={a: np.concatenate(losses[a]) for a in agent_ids},
                           indices=np.concatenate(indices))


def summarize(epoch: int, split: Split, embeddings: Mapping[str, np.ndarray], losses: Mapping[str, np.ndarray],
              partition: SubContextPartition, beta: float, with_agent_similarity: bool = False) -> MetricRecord:
    """Запись метрик по готовым эмбеддингам и потерям"""
    groups = partition.member_lists()
    accuracies = group_accuracies(embeddings, groups)
    losses_by_group = group_losses(losses, groups)

    flagged, message = False, ""
    try:
        accuracy = context_accuracy(embeddings, groups)
    except UndefinedMetricException as e:
        accuracy, flagged, message = None, True, str(e)
        logger.warning(f"⚠️ Эпоха {epoch} ({split.value}): {e}")

    record = MetricRecord(
        epoch=epoch,
        split=split.value,
        context_accuracy=accuracy,
        context_loss=context_loss(losses, groups),
        groups=[GroupMetric(group_id=group_key(members), members=members,
                            accuracy=accuracies[group_key(members)], loss=losses_by_group[group_key(members)])
                for members in groups],
        flagged=flagged,
        message=message,
        embedding_spread={agent_id: embedding_spread(embeddings[agent_id]) for agent_id in sorted(embeddings)}
    )
    if with_agent_similarity:
        agent_ids, matrix = agent_similarity_matrix(embeddings, beta)
        record.agent_similarity = {'agents': agent_ids, 'beta': beta, 'matrix': matrix.tolist()}
    return record


def evaluate(models: Mapping[str, AgentModel], datasets: Mapping[str, AgentDataset],
             partition: SubContextPartition, config, epoch: int, split: Split) -> Tuple[MetricRecord, SplitEmbeddings]:
    """Оценка разбиения данных при активном разбиении агентов (config - RunConfig)"""
    result = embed_split(models, datasets, partition, config.window, config.batch,
                         config.loss_config(), config.strategy)
    record = summarize(epoch, split, result.embeddings, result.losses, partition, config.beta,
                       with_agent_similarity=split is Split.TEST)
    accuracy = 'не определена' if record.context_accuracy is None else f"{record.context_accuracy:.4f}"
    logger.info(f"📊 Эпоха {epoch} ({split.value}): точность {accuracy}, потери {record.context_loss:.6f}")
    return record, result
