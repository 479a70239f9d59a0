"""DTO приложения SPECTRA_APP.

В модуле собраны:
— контекст выполнения (конфигурация + параметры запуска),
— входные структуры (Input) для сервисов,
— отчёт анализа `AnalysisReport` — единица вывода в пакет отчётов и в консоль,
— элементы человеко-читаемого отчёта.

Важно:
— `AnalysisReport.payload()` даёт JSON-схему {op, level, inputs, table, verdict, summary};
  матрицы и функции уровня в неё не входят и пишутся отдельными файлами.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, TypeAlias

from SPECTRA_APP.APP.types import StatusReport, Subcommand, Verdict
from SPECTRA_APP.CORE.calculus import OperatorMatrix
from SPECTRA_APP.CORE.group_model import GroupLevel
from SPECTRA_APP.CORE.transform import GridFunction, SpectrumFunction

if TYPE_CHECKING:
    from SPECTRA_APP.APP.ports import SymbolLoader
    from SPECTRA_APP.CONFIG.config import SpectraConfig

ReportItems: TypeAlias = list["ReportItem"]


# fmt: off
@dataclass(frozen=True)
class RuntimeContext:
    """Контекст выполнения приложения.

    Attributes
    ----------
    app
        Проверенная конфигурация запуска (файл + флаги командной строки)
    command
        Подкоманда
    output_json
        Вывод в stdout в JSON вместо таблиц rich
    threads
        Число потоков для обработки уровней (SPECTRA_THREADS)
    """
    app                 : SpectraConfig
    command             : Subcommand
    output_json         : bool                          = False
    threads             : int                           = 1


@dataclass(frozen=True)
class Table:
    """Таблица отчёта: заголовок и строки (одна строка на k, оболочку или t)."""
    header              : tuple[str, ...]
    rows                : tuple[tuple[Any, ...], ...]   = ()


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    """Результат одной операции на одном уровне (или сводка по уровням, level=None).

    Attributes
    ----------
    op
        Имя подкоманды
    level
        Уровень, к которому относится отчёт; None — сводка по нескольким уровням
    inputs
        Эхо входных параметров операции
    table
        Таблица значений (пишется в JSON и CSV)
    summary
        Скалярные результаты
    verdict
        Итоговый вердикт или None
    matrices / functions
        Артефакты, сохраняемые отдельными файлами (имя → объект)
    timing
        Замер времени: пишется в timing.json вне manifest
    """
    op                  : str
    level               : GroupLevel | None
    inputs              : dict[str, Any]
    table               : Table | None                  = None
    summary             : dict[str, Any]                = field(default_factory=dict)
    verdict             : Verdict | None                = None
    matrices            : dict[str, OperatorMatrix]     = field(default_factory=dict)
    functions           : dict[str, GridFunction | SpectrumFunction] = field(default_factory=dict)
    timing              : bool                          = False

    @property
    def location(self) -> str:
        """Каталог отчёта внутри пакета: N<k> для уровня, all — для сводки."""
        return f"N{self.level.N}" if self.level is not None else "all"

    def payload(self) -> dict[str, Any]:
        return {
            "op": self.op,
            "level": self.level.to_json_dict() if self.level is not None else None,
            "inputs": self.inputs,
            "table": (
                {"header": list(self.table.header), "rows": [list(r) for r in self.table.rows]}
                if self.table is not None
                else None
            ),
            "summary": self.summary,
            "verdict": self.verdict.value if self.verdict is not None else None,
        }


@dataclass(frozen=True)
class AnalysisInput:
    """Входные данные сервиса анализа.

    Attributes
    ----------
    context
        Контекст выполнения
    levels
        Уровни усечения (в порядке возрастания N)
    symbols
        Загрузчик символов уровня (основной и второй символ)
    """
    context             : RuntimeContext
    levels              : tuple[GroupLevel, ...]
    symbols             : SymbolLoader


@dataclass(frozen=True)
class ReportItem:
    """Строка человеко-читаемого отчёта."""
    name                : str
    status              : StatusReport
    comment             : str


@dataclass(frozen=True)
class ReportInput:
    """Входные данные сервиса вывода отчёта."""
    context             : RuntimeContext
    reports             : tuple[AnalysisReport, ...]
    items               : tuple[ReportItem, ...]        = ()
    bundle_dir          : str | None                    = None
# fmt: on
