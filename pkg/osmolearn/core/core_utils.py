import json
from pathlib import Path
from typing import Any, List, Sequence, Union

import numpy as np

from osmolearn.core.core_logger import get_logger
from osmolearn.core.core_exceptions import StorageException

logger = get_logger(__name__)


class CoreUtils:
    """Утилиты общего назначения"""

    @staticmethod
    def serialize_for_json(obj: Any) -> Any:
        """Сериализация объекта для JSON (numpy-типы, пути, dataclass-подобные)"""
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, (set, frozenset)):
            return sorted(obj)
        if isinstance(obj, Path):
            return str(obj)
        if hasattr(obj, 'to_dict'):
            return obj.to_dict()
        return str(obj)

    @staticmethod
    def stable_json_dumps(data: Any) -> str:
        """Детерминированная сериализация в JSON (одинаковые байты для одинаковых данных)"""
        return json.dumps(data, default=CoreUtils.serialize_for_json, sort_keys=True,
                          separators=(',', ':'), ensure_ascii=True)

    @staticmethod
    def safe_json_loads(data: str, source: str = '<string>') -> Any:
        """Десериализация JSON с указанием источника в ошибке"""
        try:
            return json.loads(data)
        except json.JSONDecodeError as e:
            logger.error(f"❌ Ошибка десериализации JSON из {source}: {e}")
            raise StorageException(f"Поврежденный JSON в {source}: {e}")

    @staticmethod
    def format_float(value: float) -> str:
        """Запись float без потери точности (кратчайшее представление)"""
        return repr(float(value))

    @staticmethod
    def chunk_list(lst: Sequence, chunk_size: int) -> List:
        """Разбивка последовательности на части"""
        return [lst[i:i + chunk_size] for i in range(0, len(lst), chunk_size)]

    @staticmethod
    def ensure_dir(path: Union[str, Path]) -> Path:
        """Создание директории (с родителями), если её нет"""
        path = Path(path)
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise StorageException(f"Не удалось создать директорию {path}: {e}")
        return path

    @staticmethod
    def parse_agent_list(text: str) -> List[str]:
        """Разбор списка агентов вида '0,1' или 'M0, M1'"""
        return [item.strip() for item in text.split(',') if item.strip()]

