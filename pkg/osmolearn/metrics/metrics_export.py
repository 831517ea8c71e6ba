import csv
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np

from osmolearn.core.core_exceptions import StorageException
from osmolearn.core.core_logger import get_logger
from osmolearn.core.core_utils import CoreUtils
from osmolearn.metrics.metrics_types import MetricRecord, SimilarityMatrix

logger = get_logger(__name__)

METRICS_COLUMNS = ['epoch', 'split', 'group_id', 'accuracy', 'loss']
OVERALL_GROUP = 'overall'


def _format_optional(value) -> str:
    return '' if value is None else CoreUtils.format_float(value)


def _format_beta(beta: float) -> str:
    return str(int(beta)) if float(beta).is_integer() else CoreUtils.format_float(beta)


def metric_rows(record: MetricRecord) -> List[List[str]]:
    """Строки CSV одной записи: сначала 'overall', затем группы"""
    rows = [[str(record.epoch), record.split, OVERALL_GROUP,
             _format_optional(record.context_accuracy), CoreUtils.format_float(record.context_loss)]]
    for group in record.groups:
        rows.append([str(record.epoch), record.split, group.group_id,
                     _format_optional(group.accuracy), CoreUtils.format_float(group.loss)])
    return rows


def write_metrics_csv(records: Iterable[MetricRecord], path: Union[str, Path]) -> Path:
    """Экспорт записей метрик в CSV (epoch,split,group_id,accuracy,loss)"""
    path = Path(path)
    CoreUtils.ensure_dir(path.parent)
    try:
        with path.open('w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(METRICS_COLUMNS)
            for record in records:
                writer.writerows(metric_rows(record))
    except OSError as e:
        raise StorageException(f"Не удалось записать метрики в {path}: {e}")
    logger.debug(f"📊 Метрики записаны в {path}")
    return path


def read_metrics_csv(path: Union[str, Path]) -> List[dict]:
    """Чтение metrics.csv как списка словарей (значения - строки)"""
    path = Path(path)
    try:
        with path.open('r', newline='', encoding='utf-8') as f:
            reader = csv.DictReader(f)
            if reader.fieldnames != METRICS_COLUMNS:
                raise StorageException(f"Неожиданные столбцы в {path}: {reader.fieldnames}")
            return list(reader)
    except OSError as e:
        raise StorageException(f"Не удалось прочитать метрики {path}: {e}")


def _write_matrix(path: Path, header: str, matrix: np.ndarray):
    CoreUtils.ensure_dir(path.parent)
    try:
        with path.open('w', newline='', encoding='utf-8') as f:
            f.write(header + '\n')
            writer = csv.writer(f, lineterminator='\n')
            for row in matrix:
                writer.writerow([CoreUtils.format_float(value) for value in row])
    except OSError as e:
        raise StorageException(f"Не удалось записать матрицу в {path}: {e}")


def write_similarity_csv(matrix: SimilarityMatrix, path: Union[str, Path], cosine: bool = False) -> Path:
    """CSV матрицы сходства; при cosine=True пишется исходный косинус (beta = 1)"""
    path = Path(path)
    beta = 1.0 if cosine else matrix.beta
    header = f"# agents={matrix.agent_a},{matrix.agent_b} beta={_format_beta(beta)} T={matrix.size}"
    _write_matrix(path, header, matrix.cosine if cosine else matrix.values)
    return path


def read_similarity_csv(path: Union[str, Path]) -> np.ndarray:
    """Чтение матрицы сходства из CSV (строка-комментарий пропускается)"""
    try:
        return np.loadtxt(Path(path), delimiter=',', comments='#', ndmin=2)
    except (OSError, ValueError) as e:
        raise StorageException(f"Не удалось прочитать матрицу {path}: {e}")


def write_similarity_pgm(matrix: SimilarityMatrix, path: Union[str, Path]) -> Path:
    """Изображение в градациях серого (PGM, текстовый P2): [-1, 1] -> [0, 255]"""
    path = Path(path)
    CoreUtils.ensure_dir(path.parent)
    pixels = np.rint((np.clip(matrix.values, -1.0, 1.0) + 1.0) / 2.0 * 255.0).astype(np.int64)
    height, width = pixels.shape
    lines = ['P2', f"# agents={matrix.agent_a},{matrix.agent_b} beta={_format_beta(matrix.beta)}",
             f"{width} {height}", '255']
    lines.extend(' '.join(str(value) for value in row) for row in pixels)
    try:
        path.write_text('\n'.join(lines) + '\n', encoding='ascii')
    except OSError as e:
        raise StorageException(f"Не удалось записать изображение {path}: {e}")
    return path


def write_agent_similarity_csv(agent_ids: Sequence[str], matrix: np.ndarray, beta: float,
                               path: Union[str, Path]) -> Path:
    """n x n матрица среднего сходства агентов"""
    path = Path(path)
    header = f"# agents={','.join(agent_ids)} beta={_format_beta(beta)}"
    _write_matrix(path, header, matrix)
    return path
