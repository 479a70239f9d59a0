"""
symbol_loader.py

Загрузчик символа уровня из параметров запуска.

Источник задаётся ровно одним ключом: ``symbol`` (выражение), ``builtin``
(встроенный символ) или ``csv`` (внешняя таблица); второй символ
(compose-residual) — ключами с суффиксом ``2``.
"""

from loguru import logger

from GENERAL.errors import ConfigError, EvalError
from SPECTRA_APP.ADAPTERS.persist import import_symbol_csv
from SPECTRA_APP.CONFIG.config import SpectraConfig
from SPECTRA_APP.CORE.group_model import GroupLevel
from SPECTRA_APP.CORE.symbol_parser import parse_symbol
from SPECTRA_APP.CORE.symbols import SymbolGrid, eval_grid, evaluate, parse_builtin
from SPECTRA_APP.CORE.transform import GridFunction


class DefaultSymbolLoader:
    """Строит SymbolGrid для заданного уровня по ключам конфигурации."""

    def __init__(self, config: SpectraConfig) -> None:
        self.config = config

    def _keys(self, second: bool) -> tuple[str | None, str | None, object]:
        suffix = "2" if second else ""
        return (
            getattr(self.config, "symbol" + suffix),
            getattr(self.config, "builtin" + suffix),
            getattr(self.config, "csv" + suffix),
        )

    def load(self, level: GroupLevel, second: bool = False) -> SymbolGrid:
        text, builtin, csv_path = self._keys(second)
        if text is not None:
            grid = eval_grid(parse_symbol(text), level)
        elif builtin is not None:
            grid = eval_grid(parse_builtin(builtin), level)
        elif csv_path is not None:
            grid = import_symbol_csv(csv_path, level)
        else:
            key = "symbol2/builtin2/csv2" if second else "symbol/builtin/csv"
            raise ConfigError(f"Не задан источник символа ({key})")
        logger.debug("Символ {} на уровне {}", grid.provenance, level)
        return grid

    def describe(self, second: bool = False) -> str:
        text, builtin, csv_path = self._keys(second)
        if text is not None:
            return f"symbol:{text}"
        if builtin is not None:
            return f"builtin:{builtin}"
        if csv_path is not None:
            return f"csv:{csv_path}"
        return ""


def expression_function(text: str, level: GroupLevel) -> GridFunction:
    """Функция уровня из выражения, зависящего только от x."""
    expr = parse_symbol(text)
    if expr.uses_xi():
        raise EvalError("Выражение функции может зависеть только от x")
    return GridFunction(level, evaluate(expr, level).values[:, 0])
