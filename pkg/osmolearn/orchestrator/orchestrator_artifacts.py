"""
Дерево артефактов запуска:

    <out_dir>/metrics.csv        записи метрик (epoch,split,group_id,accuracy,loss)
    <out_dir>/clusters.jsonl     трасса перекластеризаций
    <out_dir>/checkpoints/       модели агентов и манифест
    <out_dir>/simmat/            матрицы сходства (CSV и PGM)
    <out_dir>/run.json           конфигурация, время и диагностика
"""
import csv
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from osmolearn.core.core_exceptions import SchemaException, StorageException
from osmolearn.core.core_logger import get_logger
from osmolearn.core.core_utils import CoreUtils
from osmolearn.datagen.datagen_types import Split
from osmolearn.diffuser.diffuser_trace import ClusterTrace, read_cluster_trace
from osmolearn.metrics.metrics_export import (
    write_agent_similarity_csv, write_metrics_csv, write_similarity_csv, write_similarity_pgm
)
from osmolearn.metrics.metrics_similarity import agent_similarity_matrix, similarity_matrix
from osmolearn.metrics.metrics_types import MetricRecord
from osmolearn.model.model_types import AgentModel
from osmolearn.orchestrator.orchestrator_checkpoint import checkpoint
from osmolearn.settings import get_setting

logger = get_logger(__name__)

METRICS_NAME = 'metrics.csv'
TRACE_NAME = 'clusters.jsonl'
RUN_NAME = 'run.json'


@dataclass
class SimilarityExports:
    """Записанные файлы и средние диагонали матриц пар агентов"""
    paths: List[Path] = field(default_factory=list)
    diagonals: Dict[str, Dict[str, float]] = field(default_factory=dict)


def similarity_filenames(split: str, agent_a: str, agent_b: str) -> Tuple[str, str, str]:
    stem = f"{split}_{agent_a}_{agent_b}"
    return f"{stem}_beta.csv", f"{stem}_cos.csv", f"{stem}.pgm"


class RunArtifacts:
    """Артефакты одного запуска обучения"""

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = CoreUtils.ensure_dir(out_dir)
        self.metrics_path = self.out_dir / METRICS_NAME
        self.checkpoints_dir = self.out_dir / 'checkpoints'
        self.simmat_dir = self.out_dir / 'simmat'
        self.run_path = self.out_dir / RUN_NAME
        self.trace = ClusterTrace(self.out_dir / TRACE_NAME)
        self.records: List[MetricRecord] = []

    def add_record(self, record: MetricRecord):
        self.records.append(record)

    def records_for(self, split: Split) -> List[MetricRecord]:
        return [record for record in self.records if record.split == split.value]

    def final_record(self, split: Split) -> Optional[MetricRecord]:
        records = self.records_for(split)
        return records[-1] if records else None

    def write_metrics(self) -> Path:
        return write_metrics_csv(self.records, self.metrics_path)

    def write_checkpoints(self, models: Mapping[str, AgentModel]) -> Path:
        return checkpoint(models, self.checkpoints_dir)

    def write_similarity(self, split: Split, embeddings: Mapping[str, np.ndarray], indices: np.ndarray,
                         beta: float, pairs: Optional[Sequence[Tuple[str, str]]] = None) -> SimilarityExports:
        """Матрицы сходства T x T по первым SIMMAT_MAX_INDEX эмбеддингам"""
        return write_similarity_exports(self.simmat_dir, split, embeddings, indices, beta, pairs)

    def write_run_metadata(self, data: Dict[str, Any]) -> Path:
        try:
            self.run_path.write_text(CoreUtils.stable_json_dumps(data) + '\n', encoding='utf-8')
        except OSError as e:
            raise StorageException(f"Не удалось записать {self.run_path}: {e}")
        return self.run_path


def write_similarity_exports(directory: Union[str, Path], split: Split, embeddings: Mapping[str, np.ndarray],
                             indices: np.ndarray, beta: float,
                             pairs: Optional[Sequence[Tuple[str, str]]] = None) -> SimilarityExports:
    directory = CoreUtils.ensure_dir(directory)
    limit = int(get_setting('SIMMAT_MAX_INDEX', 200))
    agent_ids = sorted(embeddings)
    all_pairs = pairs is None
    if all_pairs:
        pairs = list(combinations_with_replacement(agent_ids, 2))

    exports = SimilarityExports()
    written = exports.paths
    for agent_a, agent_b in pairs:
        for agent_id in (agent_a, agent_b):
            if agent_id not in embeddings:
                raise SchemaException(f"Агент {agent_id} отсутствует в запуске (есть {agent_ids})")
        matrix = similarity_matrix(embeddings[agent_a][:limit], embeddings[agent_b][:limit], beta,
                                   agent_a=agent_a, agent_b=agent_b, indices=indices[:limit])
        beta_name, cos_name, pgm_name = similarity_filenames(split.value, agent_a, agent_b)
        written.append(write_similarity_csv(matrix, directory / beta_name))
        written.append(write_similarity_csv(matrix, directory / cos_name, cosine=True))
        written.append(write_similarity_pgm(matrix, directory / pgm_name))
        # среднее по совпадающим индексам t: ответы двух агентов на одно окно
        exports.diagonals[f"{agent_a}_{agent_b}"] = {'mean': matrix.diagonal_mean(),
                                                   'abs_mean': matrix.diagonal_mean(absolute=True)}

    if all_pairs and len(agent_ids) > 1:
        ids, matrix = agent_similarity_matrix(embeddings, beta)
        written.append(write_agent_similarity_csv(ids, matrix, beta, directory / f"agents_{split.value}.csv"))
    logger.info(f"📊 Матрицы сходства ({split.value}) записаны в {directory}: {len(written)} файлов")
    return exports


def read_run_metadata(run_dir: Union[str, Path]) -> Dict[str, Any]:
    path = Path(run_dir) / RUN_NAME
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise StorageException(f"Не удалось прочитать {path}: {e}")
    data = CoreUtils.safe_json_loads(text, str(path))
    if not isinstance(data, dict) or not isinstance(data.get('config'), dict):
        raise SchemaException(f"{path}: нет раздела config")
    return data


def export_clusters(run_dir: Union[str, Path], path: Optional[Union[str, Path]] = None) -> Path:
    """clusters.jsonl -> clusters.csv (epoch,group_id,members)"""
    run_dir = Path(run_dir)
    path = Path(path) if path else run_dir / 'clusters.csv'
    partitions = read_cluster_trace(run_dir / TRACE_NAME)
    try:
        with path.open('w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['epoch', 'group_id', 'members'])
            for partition in partitions:
                for group_id, members in zip(partition.group_ids(), partition.member_lists()):
                    writer.writerow([partition.epoch, group_id, ' '.join(members)])
    except OSError as e:
        raise StorageException(f"Не удалось записать {path}: {e}")
    logger.info(f"✅ Трасса из {len(partitions)} перекластеризаций записана в {path}")
    return path
