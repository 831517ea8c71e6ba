from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from osmolearn.core.core_exceptions import ConfigurationException, StorageException
from osmolearn.core.core_logger import get_logger
from osmolearn.core.core_utils import CoreUtils
from osmolearn.datagen.datagen_types import PRESET_EPOCHS, ContextName, ContextSpec
from osmolearn.diffuser.diffuser_types import OsmoticStrategy
from osmolearn.losses.losses_types import LossConfig, PresSimilarity
from osmolearn.settings import get_setting, parse_env_lines

logger = get_logger(__name__)


def _default_lambda() -> float:
    return float(get_setting('DEFAULT_LAMBDA', 0.9))


class RunConfig(BaseModel):
    """Конфигурация запуска обучения"""
    model_config = ConfigDict(extra='forbid', populate_by_name=True, frozen=True)

    context: ContextName = ContextName.SIMPLE
    epochs: int = Field(default=5, ge=0)
    lr: float = Field(default=0.001, gt=0.0)
    lambda_: float = Field(default_factory=_default_lambda, alias='lambda', ge=0.0, le=1.0)
    temperature: float = Field(default=0.1, gt=0.0)
    similarity: PresSimilarity = PresSimilarity.DOT
    beta: float = Field(default=2.0, ge=1.0)
    tau: float = Field(default=0.97, ge=-1.0, le=1.0)
    window: int = Field(default=10, ge=1)
    batch: int = Field(default=50, ge=1)
    cluster_period: int = Field(default=2, ge=1)
    cluster_samples: int = Field(default=20, ge=1)
    seed: int = Field(default=42, ge=0, lt=2 ** 64)
    out_dir: Path = Path('out')

    n_train: int = Field(default=1000, ge=1)
    n_test: int = Field(default=200, ge=1)
    misleading_count: int = Field(default=2, ge=1)
    data_dir: Optional[Path] = None
    strategy: OsmoticStrategy = OsmoticStrategy.MEAN
    workers: int = Field(default=1, ge=1)

    @model_validator(mode='after')
    def check_window_fits(self) -> 'RunConfig':
        if self.data_dir is None and self.window > min(self.n_train, self.n_test):
            raise ValueError(f"window={self.window} больше длины выборки (n_train={self.n_train}, n_test={self.n_test})")
        return self

    def loss_config(self) -> LossConfig:
        return LossConfig(lambda_=self.lambda_, temperature=self.temperature, similarity=self.similarity)

    def context_spec(self) -> ContextSpec:
        return ContextSpec(name=self.context, seed=self.seed, n_train=self.n_train,
                           n_test=self.n_test, misleading_count=self.misleading_count)

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode='json', by_alias=True)


def _flatten(document: Dict[str, Any]) -> Dict[str, Any]:
    """Вложенные разделы JSON-документа поднимаются на верхний уровень"""
    flat = {}
    for key, value in document.items():
        if isinstance(value, dict):
            flat.update(_flatten(value))
        else:
            flat[key] = value
    return flat


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Чтение файла конфигурации: key=value или JSON (.json)"""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigurationException(f"Не удалось прочитать конфигурацию {path}: {e}")
    if path.suffix.lower() == '.json':
        try:
            document = CoreUtils.safe_json_loads(text, str(path))
        except StorageException as e:
            raise ConfigurationException(str(e))
        if not isinstance(document, dict):
            raise ConfigurationException(f"{path}: конфигурация должна быть JSON-объектом")
        return _flatten(document)
    return parse_env_lines(text.splitlines())


def parse_overrides(overrides: Iterable[str]) -> Dict[str, str]:
    """Переопределения вида key=value"""
    result = {}
    for item in overrides:
        if '=' not in item:
            raise ConfigurationException(f"Переопределение '{item}' должно иметь вид key=value")
        key, value = item.split('=', 1)
        result[key.strip()] = value.strip()
    return result


def build_config(values: Dict[str, Any]) -> RunConfig:
    """Проверка значений; ошибка называет ключ"""
    values = {key: (None if key == 'data_dir' and value in ('', None) else value) for key, value in values.items()}
    if 'epochs' not in values:
        try:
            context = ContextName(values.get('context', ContextName.SIMPLE.value))
            values['epochs'] = PRESET_EPOCHS[context]
        except ValueError:
            pass  # неизвестный контекст отклонит проверка ниже
    try:
        return RunConfig.model_validate(values)
    except ValidationError as e:
        problems = '; '.join(f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}"
                             for error in e.errors())
        raise ConfigurationException(f"Некорректная конфигурация: {problems}")


def load_config(path: Optional[Union[str, Path]] = None, overrides: Iterable[str] = (),
                seed: Optional[int] = None, out_dir: Optional[Union[str, Path]] = None) -> RunConfig:
    """Файл конфигурации, затем --set, затем --seed/--out"""
    values: Dict[str, Any] = read_config_file(path) if path else {}
    values.update(parse_overrides(overrides))
    if seed is not None:
        values['seed'] = seed
    if out_dir is not None:
        values['out_dir'] = str(out_dir)
    config = build_config(values)
    logger.debug(f"Конфигурация: {config.to_dict()}")
    return config
