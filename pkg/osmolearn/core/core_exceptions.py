"""
Пользовательские исключения для системы OsmoLearn
"""


class OsmoticException(Exception):
    """Базовое исключение для OsmoLearn"""
    exit_code = 2


class ConfigurationException(OsmoticException):
    """Исключения связанные с конфигурацией запуска"""
    exit_code = 1


class ShapeException(OsmoticException):
    """Несовпадение размерностей операндов"""
    pass


class ContractException(OsmoticException):
    """Нарушение контракта между вызовами (кэш, индексы)"""
    pass


class PreconditionException(OsmoticException):
    """Не выполнено предусловие операции"""
    pass


class NumericException(OsmoticException):
    """Нечисловые значения (NaN/Inf) или вырожденные нормы"""
    pass


class BarrierException(OsmoticException):
    """Нарушение барьера синхронизации агентов и диффузора"""
    pass


class UndefinedMetricException(OsmoticException):
    """Метрика не определена для текущего разбиения"""
    pass


class StorageException(OsmoticException):
    """Исключения связанные с файлами (чекпоинты, датасеты, трассы)"""
    exit_code = 3


class SchemaException(StorageException):
    """Несовпадение схемы сохраненных данных"""
    pass
