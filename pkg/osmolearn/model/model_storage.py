"""
Бинарная запись модели агента.

Формат записи:
    MAGIC (8 байт) | длина заголовка (uint32 little-endian) | JSON-заголовок | данные
Данные - все блоки параметров и моменты Adam подряд как little-endian float64.
Заголовок сериализуется детерминированно, поэтому save -> restore -> save дает
побайтно одинаковые файлы.
"""
import struct
from pathlib import Path
from typing import Union

import numpy as np

from osmolearn.core.core_exceptions import SchemaException, ShapeException, StorageException
from osmolearn.core.core_logger import get_logger
from osmolearn.core.core_utils import CoreUtils
from osmolearn.model.model_types import AgentModel
from osmolearn.numerics.numerics_types import AdamState, GruParams, LinearParams

logger = get_logger(__name__)

MAGIC = b'OSMLCKPT'
FORMAT_VERSION = 1
_LE_F64 = np.dtype('<f8')


def encode_model_record(model: AgentModel) -> bytes:
    """Сериализация модели агента в байты"""
    sections = {'param': model.blocks(),
                'adam_m': model.optimizer_state.m,
                'adam_v': model.optimizer_state.v}
    entries, payload, offset = [], [], 0
    for section, blocks in sections.items():
        for name in sorted(blocks):
            arr = np.ascontiguousarray(blocks[name], dtype=_LE_F64)
            entries.append({'section': section, 'name': name, 'shape': list(arr.shape), 'offset': offset})
            payload.append(arr.tobytes(order='C'))
            offset += arr.size

    header = {
        'format': 'osmolearn-agent',
        'version': FORMAT_VERSION,
        'agent_id': model.agent_id,
        'n_features': model.n_features,
        'hidden_size': model.hidden_size,
        'embedding_size': model.embedding_size,
        'adam_t': model.optimizer_state.t,
        'blocks': entries,
    }
    header_bytes = CoreUtils.stable_json_dumps(header).encode('utf-8')
    return MAGIC + struct.pack('<I', len(header_bytes)) + header_bytes + b''.join(payload)


def decode_model_record(data: bytes, source: str = '<bytes>') -> AgentModel:
    """Восстановление модели агента из байтов"""
    if len(data) < len(MAGIC) + 4 or data[:len(MAGIC)] != MAGIC:
        raise StorageException(f"{source}: не является чекпоинтом агента (неверная сигнатура)")
    (header_len,) = struct.unpack('<I', data[len(MAGIC):len(MAGIC) + 4])
    start = len(MAGIC) + 4
    if len(data) < start + header_len:
        raise StorageException(f"{source}: заголовок обрезан")
    header = CoreUtils.safe_json_loads(data[start:start + header_len].decode('utf-8', errors='replace'), source)
    if not isinstance(header, dict):
        raise SchemaException(f"{source}: заголовок должен быть JSON-объектом")
    if header.get('format') != 'osmolearn-agent' or header.get('version') != FORMAT_VERSION:
        raise SchemaException(f"{source}: неподдерживаемый формат {header.get('format')} v{header.get('version')}")

    try:
        payload = np.frombuffer(data, dtype=_LE_F64, offset=start + header_len)
    except ValueError as e:
        raise StorageException(f"{source}: поврежденные данные параметров: {e}")
    sections = {'param': {}, 'adam_m': {}, 'adam_v': {}}
    try:
        for entry in header['blocks']:
            size = int(np.prod(entry['shape'], dtype=np.int64))
            chunk = payload[entry['offset']:entry['offset'] + size]
            if chunk.size != size:
                raise StorageException(f"{source}: блок {entry['name']} обрезан")
            sections[entry['section']][entry['name']] = chunk.astype(np.float64).reshape(entry['shape'])

        params = sections['param']
        gru = GruParams.from_blocks({k[len('gru.'):]: v for k, v in params.items() if k.startswith('gru.')})
        proj = LinearParams.from_blocks({k[len('proj.'):]: v for k, v in params.items() if k.startswith('proj.')})
        state = AdamState(m=sections['adam_m'], v=sections['adam_v'], t=int(header['adam_t']))
        return AgentModel(agent_id=str(header['agent_id']), n_features=int(header['n_features']),
                          gru=gru, proj=proj, optimizer_state=state)
    except (KeyError, ValueError, TypeError, ShapeException) as e:
        raise SchemaException(f"{source}: заголовок не соответствует схеме: {e}")


def save_model(model: AgentModel, path: Union[str, Path]):
    """Запись чекпоинта агента в файл"""
    path = Path(path)
    try:
        path.write_bytes(encode_model_record(model))
    except OSError as e:
        raise StorageException(f"Не удалось записать чекпоинт {path}: {e}")
    logger.debug(f"💾 Чекпоинт агента {model.agent_id} записан: {path}")


def load_model(path: Union[str, Path]) -> AgentModel:
    """Чтение чекпоинта агента из файла"""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise StorageException(f"Не удалось прочитать чекпоинт {path}: {e}")
    return decode_model_record(data, str(path))
