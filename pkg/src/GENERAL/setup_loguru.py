"""setup_loguru.py

Настройка логирования через Loguru.

Функция :func:`setup_loguru` сбрасывает ранее зарегистрированные sinks Loguru и
регистрирует:

- вывод в stderr (консоль);
- (опционально) вывод в файл согласно разделу ``logging.file`` конфигурации.

Если файловый sink зарегистрировать не удалось (нет прав, путь некорректен),
пишется предупреждение в консольный лог и расчёт продолжается: пакетный
запуск не должен зависеть от файла лога.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any

from loguru import logger

from GENERAL.config import LoggingConfig


def _ensure_parent_dir_for_file_sink(path_like: Any) -> None:
    """Гарантирует существование директории для файлового sink.

    Работает только для путей файловой системы (str/Path).
    """
    if isinstance(path_like, (str, Path)):
        Path(path_like).parent.mkdir(parents=True, exist_ok=True)


def setup_loguru(config: LoggingConfig) -> bool:
    """Инициализирует Loguru по настройкам логирования.

    Args:
        config: Раздел ``logging`` конфигурации (console + file).

    Returns:
        True, если файловый sink зарегистрирован (или выключен), False при ошибке.
    """
    # Сбрасываем sinks, чтобы повторная настройка не дублировала вывод.
    logger.remove()

    # fmt: off
    logger.add(
        sys.stderr,
        level               =config.console.level,
        format              =config.console.format,
        colorize            =True,
    )
    # fmt: on

    if not config.file.enabled:
        return True

    log_file_path = Path(config.file.path) if config.file.path else None
    try:
        _ensure_parent_dir_for_file_sink(log_file_path)

        # fmt: off
        logger.add(
            log_file_path,
            level               =config.file.level,
            format              =config.file.format,
            rotation            =config.file.rotation,
            retention           =config.file.retention,
            compression         =config.file.compression,
            encoding            ="utf-8",
        )
        # fmt: on
    except (OSError, ValueError, TypeError) as e:
        # консольный sink уже включён
        logger.warning(
            "Не удалось зарегистрировать файл логирования: {path!r}\n{e}",
            path=log_file_path,
            e=e,
        )
        return False

    return True
