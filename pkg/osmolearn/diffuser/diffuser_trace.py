from pathlib import Path
from typing import List, Union

from osmolearn.core.core_exceptions import StorageException
from osmolearn.core.core_logger import get_logger
from osmolearn.core.core_utils import CoreUtils
from osmolearn.diffuser.diffuser_types import SubContextPartition

logger = get_logger(__name__)


class ClusterTrace:
    """Трасса кластеризации: одна JSON-строка на событие перекластеризации"""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        CoreUtils.ensure_dir(self.path.parent)
        try:
            self.path.write_text('', encoding='utf-8')
        except OSError as e:
            raise StorageException(f"Не удалось создать трассу {self.path}: {e}")

    def append(self, partition: SubContextPartition):
        try:
            with self.path.open('a', encoding='utf-8') as f:
                f.write(CoreUtils.stable_json_dumps(partition.to_dict()) + '\n')
        except OSError as e:
            raise StorageException(f"Не удалось дописать трассу {self.path}: {e}")
        logger.debug(f"Трасса: эпоха {partition.epoch} записана в {self.path}")


def read_cluster_trace(path: Union[str, Path]) -> List[SubContextPartition]:
    """Все разбиения из clusters.jsonl в порядке записи"""
    path = Path(path)
    try:
        lines = path.read_text(encoding='utf-8').splitlines()
    except OSError as e:
        raise StorageException(f"Не удалось прочитать трассу {path}: {e}")
    return [SubContextPartition.from_dict(CoreUtils.safe_json_loads(line, f"{path}:{number}"))
            for number, line in enumerate(lines, start=1) if line.strip()]
