"""Общие части сервисов анализа: обход уровней, эхо входа, генераторы случайных чисел."""

from collections.abc import Callable, Iterable
from typing import Any, TypeVar

import numpy as np
from loguru import logger

from SPECTRA_APP.APP.dto import AnalysisInput, Table
from SPECTRA_APP.CORE.group_model import GroupLevel
from SPECTRA_APP.INFRA.utils import map_levels

R = TypeVar("R")


def per_level(data: AnalysisInput, fn: Callable[[GroupLevel], R]) -> list[R]:
    """Результат на каждый уровень; уровни обрабатываются в пуле SPECTRA_THREADS."""

    def run_one(level: GroupLevel) -> R:
        logger.info("{}: уровень {}", data.context.command.value, level)
        return fn(level)

    return map_levels(run_one, data.levels, data.context.threads)


def base_inputs(data: AnalysisInput, *keys: str, second: bool = False) -> dict[str, Any]:
    """Эхо входа отчёта: группа, источник символа и перечисленные ключи конфигурации."""
    config = data.context.app
    inputs: dict[str, Any] = {"group": config.group, "symbol": data.symbols.describe()}
    if second:
        inputs["symbol2"] = data.symbols.describe(second=True)
    for key in keys:
        inputs[key] = getattr(config, key)
    return inputs


def level_rng(seed: int, level: GroupLevel) -> np.random.Generator:
    """Генератор, зависящий только от seed и N (не от порядка потоков)."""
    return np.random.default_rng([seed, level.N])


def table(header: Iterable[str], rows: Iterable[Iterable[Any]]) -> Table:
    return Table(tuple(header), tuple(tuple(row) for row in rows))
