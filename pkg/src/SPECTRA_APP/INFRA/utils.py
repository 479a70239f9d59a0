"""
Утилиты инфраструктуры.

Модуль содержит:
- fs_call(): единая обёртка над файловыми операциями для нормализации исключений.
- safe_mkdir(): создание директории с parents=True, exist_ok=True.
- parse_level_range(): разбор диапазона уровней вида ``4..8``.
- map_levels(): выполнение функции по уровням в пуле потоков с сохранением порядка.
"""

import re
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import TypeVar

from loguru import logger

from GENERAL.errors import ConfigError, LocalFileAccessError

T = TypeVar("T")
R = TypeVar("R")

_RANGE = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?$")


def fs_call(path: Path, action: str, fn: Callable[[], T]) -> T:
    """Выполняет файловую операцию `fn()` и преобразует ошибки ОС в LocalFileAccessError.

    Args:
        path: Путь, для которого выполняется действие (используется в тексте ошибок).
        action: Короткое описание операции (например, "запись", "чтение").
        fn: Функция без аргументов, выполняющая реальную операцию.

    Raises:
        LocalFileAccessError: При PermissionError или любом OSError.
    """
    try:
        return fn()
    except PermissionError as e:
        raise LocalFileAccessError(f"Нет доступа к {path}") from e
    except OSError as e:
        raise LocalFileAccessError(
            f"Ошибка файловой системы при {action} для {path}:\n{e}"
        ) from e


def safe_mkdir(dir_path: Path) -> None:
    fs_call(dir_path, "создание каталога", lambda: Path(dir_path).mkdir(parents=True, exist_ok=True))


def parse_level_range(text: str) -> tuple[int, ...]:
    """``"4..8"`` → (4, 5, 6, 7, 8); ``"3"`` → (3,)."""
    match = _RANGE.match(text)
    if match is None:
        raise ConfigError(f"Некорректный диапазон уровней {text!r}; ожидается N или A..B")
    low = int(match[1])
    high = int(match[2]) if match[2] is not None else low
    if high < low:
        raise ConfigError(f"Пустой диапазон уровней {text!r}")
    return tuple(range(low, high + 1))


def map_levels(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> list[R]:
    """Применяет `fn` к каждому элементу; результаты — в исходном порядке.

    При threads > 1 элементы обрабатываются в пуле потоков; первое исключение
    пробрасывается вызывающему.
    """
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    workers = min(threads, len(items))
    logger.debug("Пул потоков: {} задач, {} потоков", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="level") as pool:
        return list(pool.map(fn, items))
