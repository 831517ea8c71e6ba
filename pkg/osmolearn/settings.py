import os
import threading
from pathlib import Path
from typing import Dict, Any, Iterable

# Базовый путь проекта
BASE_DIR = Path(__file__).parent

# Путь к .env файлу (можно переопределить через OSMO_ENV_FILE)
ENV_FILE_PATH = Path(os.environ.get('OSMO_ENV_FILE', BASE_DIR / '.env'))

# Глобальные переменные кэша настроек
_settings_cache = {}
_last_modified = 0
_reload_lock = threading.Lock()

# Настройки по умолчанию
DEFAULT_SETTINGS = {
    # Настройки логирования
    'LOG_LEVEL': 'INFO',
    'LOG_FILE': '',

    # Архитектура кодировщика агента
    'HIDDEN_SIZE': '20',
    'EMBEDDING_SIZE': '5',

    # Оптимизатор Adam
    'ADAM_BETA1': '0.9',
    'ADAM_BETA2': '0.999',
    'ADAM_EPS': '1e-8',

    # Проверки численной устойчивости
    'CHECK_FINITE': 'True',

    # Обучение и экспорт
    'DEFAULT_LAMBDA': '0.9',
    'SIMMAT_MAX_INDEX': '200',
}


def parse_env_lines(lines: Iterable[str]) -> Dict[str, str]:
    """Разбор строк формата key=value (комментарии # и пустые строки пропускаются)"""
    result = {}
    for line in lines:
        line = line.strip()
        if line and not line.startswith('#') and '=' in line:
            key, value = line.split('=', 1)
            result[key.strip()] = value.strip()
    return result


def coerce_value(value: Any) -> Any:
    """Преобразование строкового значения в bool/int/float"""
    if not isinstance(value, str):
        return value
    if value.lower() in ('true', 'false'):
        return value.lower() == 'true'
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        return value


def load_settings() -> Dict[str, Any]:
    """Загрузка настроек из .env файла с дополнением значениями по умолчанию"""
    global _settings_cache, _last_modified

    with _reload_lock:
        try:
            # Проверяем, изменился ли файл
            if ENV_FILE_PATH.exists():
                current_modified = ENV_FILE_PATH.stat().st_mtime
                if current_modified == _last_modified and _settings_cache:
                    return _settings_cache
                _last_modified = current_modified
            elif _settings_cache:
                return _settings_cache
        except OSError as e:
            print(f"❌ Ошибка проверки файла настроек: {e}")

        settings = {}
        try:
            if ENV_FILE_PATH.exists():
                with open(ENV_FILE_PATH, 'r', encoding='utf-8') as f:
                    settings = parse_env_lines(f)
        except OSError as e:
            print(f"❌ Ошибка чтения .env файла: {e}")

        # Дополняем недостающие настройки значениями по умолчанию
        for key, default_value in DEFAULT_SETTINGS.items():
            if key not in settings:
                settings[key] = default_value

        _settings_cache = settings
        return settings


def get_setting(key: str, default: Any = None) -> Any:
    """Получение значения настройки"""
    settings = load_settings()
    return coerce_value(settings.get(key, default))


def clear_settings_cache():
    """Сброс кэша (следующее чтение перечитает .env)"""
    global _settings_cache, _last_modified
    with _reload_lock:
        _settings_cache = {}
        _last_modified = 0

