# Все сервисы контроллера реализуют use-case контракт:
#   run(input) -> output

from __future__ import annotations

from typing import Any, Protocol

from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport, ReportInput
from SPECTRA_APP.CORE.group_model import GroupLevel
from SPECTRA_APP.CORE.symbols import SymbolGrid


# ---------- символы ----------
class SymbolLoader(Protocol):
    def load(self, level: GroupLevel, second: bool = False) -> SymbolGrid: ...

    def describe(self, second: bool = False) -> str: ...


# ---------- анализ ----------
class AnalysisService(Protocol):
    def run(self, data: AnalysisInput) -> list[AnalysisReport]: ...


# ---------- пакет отчётов ----------
class BundleWriter(Protocol):
    def write_report(self, report: AnalysisReport) -> None: ...

    def finalize(self, config_echo: dict[str, Any], timestamps: dict[str, Any] | None = None) -> Any: ...


# ---------- вывод отчёта ----------
class ReportService(Protocol):
    def run(self, data: ReportInput) -> None: ...
