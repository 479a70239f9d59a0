"""Загрузка YAML-конфигурации эксперимента.

Файл конфигурации плоский; ключ ``include`` подключает базовые файлы
(строка или список путей относительно текущего файла). Значения текущего
файла перекрывают подключённые. Итоговый словарь валидируется Pydantic-моделью
(см. :func:`build_config`), причём ключи командной строки накладываются поверх
файла до валидации.
"""

from pathlib import Path
from typing import Any, Mapping, Type, TypeVar

import yaml
from pydantic import BaseModel, ValidationError

from GENERAL.errors import ConfigError, ConfigLoadError

TConfig = TypeVar("TConfig", bound=BaseModel)


def _read_yaml_file(path: Path) -> dict[str, Any]:
    try:
        raw_text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigLoadError(f"Неудачное чтение config файла: {path}\n{e}") from e

    try:
        data = yaml.safe_load(raw_text) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Нарушена структура YAML файла: {path}\n{e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"{path}\nВерхний уровень конфигурации должен быть словарём")
    return data


def merge_shallow(base: Mapping[str, Any], override: Mapping[str, Any]) -> dict[str, Any]:
    """Плоское слияние: ключи override перекрывают base, аргументы не мутируются."""
    merged = dict(base)
    merged.update(override)
    return merged


def load_yaml_with_include(path: Path, _stack: tuple[Path, ...] = ()) -> dict[str, Any]:
    """
    Собирает итоговый словарь конфигурации с поддержкой include.
    include может быть:
      - строкой: include: base.yaml
      - списком: include: [base.yaml, tolerances.yaml]
    """
    path = path.resolve()

    # защита от циклов include
    if path in _stack:
        chain = " -> ".join(str(p) for p in _stack + (path,))
        raise ConfigError(f"Циклический include в конфиге:\n{chain}")

    data = _read_yaml_file(path)

    includes = data.pop("include", None)
    if not includes:
        return data

    if isinstance(includes, str):
        includes = [includes]
    if not isinstance(includes, list) or not all(isinstance(x, str) for x in includes):
        raise ConfigError(
            f"{path}\nКлюч include должен быть строкой или списком строк (путей)."
        )

    merged: dict[str, Any] = {}
    for rel in includes:
        base_data = load_yaml_with_include(
            (path.parent / rel).resolve(), _stack=_stack + (path,)
        )
        merged = merge_shallow(merged, base_data)

    return merge_shallow(merged, data)


def load_config_data(path: str | Path) -> dict[str, Any]:
    """Читает YAML-файл конфигурации (с include) и возвращает «сырой» словарь."""
    cfg_path = Path(path)

    if cfg_path.suffix.lower() not in {".yaml", ".yml"}:
        raise ConfigLoadError(
            f"Ожидался YAML-файл конфигурации (.yaml/.yml), но получен: {cfg_path}"
        )
    if not cfg_path.exists():
        raise ConfigLoadError(f"Config файл не найден: {cfg_path}")

    return load_yaml_with_include(cfg_path)


def build_config(
    data: Mapping[str, Any],
    config_cls: Type[TConfig],
    overrides: Mapping[str, Any] | None = None,
) -> TConfig:
    """Накладывает overrides на data и валидирует результат моделью config_cls."""
    raw = merge_shallow(data, overrides or {})
    try:
        return config_cls.model_validate(raw)
    except (ValidationError, ValueError) as e:
        raise ConfigError(str(e)) from e


def load_config(
    path: str | Path | None,
    config_cls: Type[TConfig],
    overrides: Mapping[str, Any] | None = None,
) -> TConfig:
    """
    Загружает конфигурацию (файл необязателен) и валидирует её через Pydantic-класс.
    """
    data = load_config_data(path) if path is not None else {}
    return build_config(data, config_cls, overrides)
