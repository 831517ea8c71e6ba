import logging
import os
import sys
from pathlib import Path

# Уровни, допустимые в переменной окружения OSMO_LOG
OSMO_LOG_LEVELS = {
    'error': 'ERROR',
    'info': 'INFO',
    'debug': 'DEBUG',
}


# Импортируем get_setting с обработкой циклического импорта
def get_log_setting(key: str, default):
    try:
        from osmolearn.settings import get_setting
        return get_setting(key, default)
    except ImportError:
        # Fallback значения при циклическом импорте
        fallback_values = {
            'LOG_LEVEL': 'INFO',
            'LOG_FILE': ''
        }
        return fallback_values.get(key, default)


def resolve_log_level() -> str:
    """Уровень логирования: OSMO_LOG важнее настройки LOG_LEVEL"""
    env_level = os.environ.get('OSMO_LOG', '').strip().lower()
    if env_level in OSMO_LOG_LEVELS:
        return OSMO_LOG_LEVELS[env_level]
    return str(get_log_setting('LOG_LEVEL', 'INFO')).upper()


class CoreLogger:
    """Централизованная система логирования"""

    _instance = None
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self._setup_logging()
            self._initialized = True

    def _setup_logging(self):
        """Настройка системы логирования"""
        log_level = resolve_log_level()
        log_file = get_log_setting('LOG_FILE', '')

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        root_logger = logging.getLogger()
        root_logger.setLevel(getattr(logging, log_level, logging.INFO))

        # Очищаем существующие обработчики
        root_logger.handlers.clear()

        # Консольный обработчик: прогресс только в stderr, stdout не используется
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        root_logger.addHandler(console_handler)

        # Файловый обработчик
        if log_file:
            try:
                log_path = Path(log_file)
                log_path.parent.mkdir(parents=True, exist_ok=True)
                file_handler = logging.FileHandler(log_path, encoding='utf-8')
                file_handler.setFormatter(formatter)
                root_logger.addHandler(file_handler)
            except OSError as e:
                print(f"Не удалось создать файловый обработчик логов: {e}", file=sys.stderr)

    def get_logger(self, name: str) -> logging.Logger:
        """Получение логгера для модуля"""
        return logging.getLogger(name)

    def set_level(self, level: str):
        """Изменение уровня логирования"""
        level = OSMO_LOG_LEVELS.get(level.lower(), level.upper())
        logging.getLogger().setLevel(getattr(logging, level, logging.INFO))


# Глобальный экземпляр логгера
logger_instance = CoreLogger()


def get_logger(name: str) -> logging.Logger:
    """Функция для получения логгера"""
    return logger_instance.get_logger(name)


def set_level(level: str):
    """Изменение уровня логирования для всего процесса"""
    logger_instance.set_level(level)
