import csv
import re
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from osmolearn.core.core_exceptions import SchemaException, StorageException
from osmolearn.core.core_logger import get_logger
from osmolearn.core.core_utils import CoreUtils
from osmolearn.datagen.datagen_types import AgentDataset, ContextDatasets, Split

logger = get_logger(__name__)

FILE_PATTERN = re.compile(r'^(?P<split>train|test)_agent_(?P<agent>[A-Za-z0-9]+)\.csv$')


def dataset_filename(split: Split, agent_id: str) -> str:
    return f"{split.value}_agent_{agent_id}.csv"


def save_dataset(dataset: AgentDataset, path: Union[str, Path], header: Optional[Dict[str, Any]] = None) -> Path:
    """CSV ряда: строки-комментарии с метаданными, затем t,feature_0[,feature_1]"""
    path = Path(path)
    CoreUtils.ensure_dir(path.parent)
    meta = {'agent_id': dataset.agent_id, 'split': dataset.split.value}
    meta.update(header or {})
    try:
        with path.open('w', newline='', encoding='utf-8') as f:
            for key in sorted(meta):
                f.write(f"# {key}={CoreUtils.stable_json_dumps(meta[key])}\n")
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['t', *dataset.feature_names])
            for t, row in zip(dataset.timestamps, dataset.features):
                writer.writerow([str(t), *(CoreUtils.format_float(value) for value in row)])
    except OSError as e:
        raise StorageException(f"Не удалось записать ряд агента {dataset.agent_id} в {path}: {e}")
    return path


def load_dataset(path: Union[str, Path], agent_id: str, split: Split) -> AgentDataset:
    """Чтение ряда агента из CSV той же схемы (в том числе внешних данных)"""
    path = Path(path)
    try:
        lines = [line for line in path.read_text(encoding='utf-8').splitlines() if not line.startswith('#')]
    except OSError as e:
        raise StorageException(f"Не удалось прочитать ряд {path}: {e}")

    rows = list(csv.reader(lines))
    if not rows or not rows[0] or rows[0][0] != 't':
        raise SchemaException(f"{path}: первым столбцом должен быть 't'")
    names = tuple(rows[0][1:])
    if not names:
        raise SchemaException(f"{path}: нет столбцов признаков")
    try:
        table = np.array([[float(value) for value in row] for row in rows[1:] if row], dtype=np.float64)
    except ValueError as e:
        raise SchemaException(f"{path}: нечисловое значение ({e})")
    if table.ndim != 2 or table.shape[1] != len(names) + 1:
        raise SchemaException(f"{path}: число значений в строках не совпадает с заголовком")
    if not np.array_equal(table[:, 0], np.arange(table.shape[0])):
        raise SchemaException(f"{path}: метки времени t должны идти подряд с нуля")
    return AgentDataset(agent_id=agent_id, split=split, features=table[:, 1:], feature_names=names)


def save_context(datasets: ContextDatasets, directory: Union[str, Path],
                 header: Optional[Dict[str, Any]] = None) -> Path:
    """Все ряды контекста: один CSV на агента и разбиение"""
    directory = CoreUtils.ensure_dir(directory)
    for split, agents in datasets.items():
        for agent_id in sorted(agents):
            save_dataset(agents[agent_id], directory / dataset_filename(split, agent_id), header)
    logger.info(f"✅ Ряды сохранены в {directory}")
    return directory


def load_context(directory: Union[str, Path]) -> ContextDatasets:
    """Загрузка контекста из каталога файлов <split>_agent_<id>.csv"""
    directory = Path(directory)
    if not directory.is_dir():
        raise StorageException(f"Каталог данных {directory} не найден")

    datasets: ContextDatasets = {Split.TRAIN: {}, Split.TEST: {}}
    for path in sorted(directory.iterdir()):
        match = FILE_PATTERN.match(path.name)
        if match is None:
            continue
        split = Split(match.group('split'))
        agent_id = match.group('agent')
        datasets[split][agent_id] = load_dataset(path, agent_id, split)

    if not datasets[Split.TRAIN] or sorted(datasets[Split.TRAIN]) != sorted(datasets[Split.TEST]):
        raise SchemaException(f"{directory}: наборы агентов train {sorted(datasets[Split.TRAIN])} "
                              f"и test {sorted(datasets[Split.TEST])} не совпадают")
    logger.info(f"✅ Загружены ряды агентов {sorted(datasets[Split.TRAIN])} из {directory}")
    return datasets
