"""Общие части конфигурации: логирование (loguru) и базовая модель настроек."""

from pathlib import Path
from typing import Self

from pydantic import BaseModel, Field, PositiveInt, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from platformdirs import user_log_dir


def default_log_dir() -> Path:
    return Path(user_log_dir(appname="padic-spectra", appauthor=False))


class ConsoleLoggingConfig(BaseModel):
    """
    Настройки логирования в консоль (loguru).

    Attributes:
        level: Уровень логирования (например, "INFO", "DEBUG").
        format: Формат сообщения для loguru.
    """

    model_config = SettingsConfigDict(extra="forbid")

    level: str = "WARNING"
    format: str = "<green>{time:HH:mm:ss}</green> | <level>{level}</level> | {message}"


class FileLoggingConfig(BaseModel):
    """
    Настройки логирования в файл (loguru).

    Файловый лог выключен по умолчанию: пакет отчётов детерминирован,
    а лог пишется вне его.
    """

    model_config = SettingsConfigDict(extra="forbid")

    enabled: bool = False
    level: str = "DEBUG"
    path: Path | None = None
    name: str = "spectra.log"
    rotation: str = "1 MB"
    format: str = (
        "{time:YYYY-MM-DD HH:mm:ss} | {level:<8} | "
        "{file.name}:{function}:{line} - {message}"
    )
    retention: str = "7 days"
    compression: str = "zip"

    @model_validator(mode="after")
    def _finalize(self) -> Self:
        if self.path is None:
            self.path = default_log_dir() / self.name
        elif not self.path.suffix:
            # директория
            self.path = self.path / self.name
        return self


class LoggingConfig(BaseModel):
    """Группа настроек логирования."""

    model_config = SettingsConfigDict(extra="forbid")

    console: ConsoleLoggingConfig = Field(default_factory=ConsoleLoggingConfig)
    file: FileLoggingConfig = Field(default_factory=FileLoggingConfig)


class CommonConfig(BaseModel):
    """
    Базовая конфигурация приложения: каталог результатов и логирование.

    Примечание:
        out_dir может не задаваться; тогда используется ``./spectra-out``.
    """

    model_config = SettingsConfigDict(
        # Запрещаем неизвестные ключи в YAML, чтобы не “проглатывать” опечатки.
        extra="forbid",
    )
    # fmt: off
    out_dir                         : Path | None                   = None
    logging                         : LoggingConfig                 = Field(default_factory=LoggingConfig)
    # fmt: on

    @model_validator(mode="after")
    def _derive_dirs(self) -> Self:
        if self.out_dir is None:
            self.out_dir = Path("spectra-out")
        return self


class SpectraEnv(BaseSettings):
    """Параметры окружения: SPECTRA_THREADS ограничивает параллелизм по уровням."""

    model_config = SettingsConfigDict(env_prefix="SPECTRA_", extra="ignore")

    threads: PositiveInt = 1
