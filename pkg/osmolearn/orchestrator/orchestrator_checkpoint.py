from pathlib import Path
from typing import Dict, Iterable, Mapping, Optional, Union

from osmolearn.core.core_exceptions import SchemaException, StorageException
from osmolearn.core.core_logger import get_logger
from osmolearn.core.core_utils import CoreUtils
from osmolearn.model.model_storage import FORMAT_VERSION, load_model, save_model
from osmolearn.model.model_types import AgentModel

logger = get_logger(__name__)

MANIFEST_NAME = 'manifest.json'


def checkpoint_filename(agent_id: str) -> str:
    return f"agent_{agent_id}.ckpt"


def checkpoint(models: Mapping[str, AgentModel], directory: Union[str, Path]) -> Path:
    """Чекпоинты всех агентов и манифест со списком агентов"""
    directory = CoreUtils.ensure_dir(directory)
    agent_ids = sorted(models)
    for agent_id in agent_ids:
        save_model(models[agent_id], directory / checkpoint_filename(agent_id))

    manifest = {
        'format_version': FORMAT_VERSION,
        'agents': agent_ids,
        'files': {agent_id: checkpoint_filename(agent_id) for agent_id in agent_ids}
    }
    try:
        (directory / MANIFEST_NAME).write_text(CoreUtils.stable_json_dumps(manifest) + '\n', encoding='utf-8')
    except OSError as e:
        raise StorageException(f"Не удалось записать манифест в {directory}: {e}")
    logger.info(f"💾 Чекпоинты агентов {agent_ids} записаны в {directory}")
    return directory


def restore(directory: Union[str, Path], expected_agents: Optional[Iterable[str]] = None) -> Dict[str, AgentModel]:
    """Восстановление моделей; набор агентов сверяется с ожидаемым"""
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    try:
        text = manifest_path.read_text(encoding='utf-8')
    except OSError as e:
        raise StorageException(f"Не удалось прочитать манифест {manifest_path}: {e}")
    manifest = CoreUtils.safe_json_loads(text, str(manifest_path))
    if not isinstance(manifest, dict) or not isinstance(manifest.get('files'), dict):
        raise SchemaException(f"{manifest_path}: манифест не соответствует схеме")

    agent_ids = sorted(str(agent_id) for agent_id in manifest.get('agents', []))
    if expected_agents is not None and agent_ids != sorted(expected_agents):
        raise SchemaException(f"Чекпоинты содержат агентов {agent_ids}, ожидались {sorted(expected_agents)}")

    models = {}
    for agent_id in agent_ids:
        filename = manifest['files'].get(agent_id)
        if filename is None:
            raise SchemaException(f"{manifest_path}: нет файла для агента {agent_id}")
        model = load_model(directory / filename)
        if model.agent_id != agent_id:
            raise SchemaException(f"{filename}: чекпоинт агента {model.agent_id} вместо {agent_id}")
        models[agent_id] = model
    logger.info(f"✅ Восстановлены модели агентов {agent_ids} из {directory}")
    return models
