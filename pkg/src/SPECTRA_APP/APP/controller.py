"""Контроллер запуска подкоманды (оркестратор приложения).

Модуль содержит `SpectraController` — тонкий слой оркестрации, который связывает
порты/сервисы приложения (символы, анализ, пакет отчётов, вывод).

Контроллер почти не содержит вычислений:
— принимает зависимости через конструктор,
— строит уровни усечения из конфигурации,
— вызывает сервис подкоманды, пишет отчёты в пакет последовательно,
— завершает пакет (manifest.json) и передаёт отчёты сервису вывода.

Ошибки нижнего уровня (валидация, численные, файловые) поднимаются как доменные
исключения и переводятся в код завершения точкой входа (main.py).
"""

from collections.abc import Callable, Mapping
from datetime import datetime, timezone
from pathlib import Path

from loguru import logger

from GENERAL.errors import ConfigError
from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport, ReportInput, RuntimeContext
from SPECTRA_APP.APP.ports import AnalysisService, BundleWriter, ReportService, SymbolLoader
from SPECTRA_APP.APP.types import Subcommand
from SPECTRA_APP.CORE.group_model import GroupLevel, make_level

# Подкоманды без уровней, не пишущие пакет
_READ_ONLY = frozenset({Subcommand.VERIFY})


class SpectraController:
    """Оркестратор одной подкоманды.

    Параметры (зависимости) передаются извне — контроллер не создаёт сервисы сам.
    """

    def __init__(
        self,
        runtime_context: RuntimeContext,
        services: Mapping[Subcommand, AnalysisService],
        symbol_loader: SymbolLoader,
        bundle_factory: Callable[[Path], BundleWriter],
        report_service: ReportService,
    ):
        """Сохраняет зависимости для последующего запуска `run()`.

        Parameters
        ----------
        runtime_context
            Контекст выполнения (конфигурация + параметры запуска)
        services
            Сервис анализа для каждой подкоманды
        symbol_loader
            Загрузчик символа уровня
        bundle_factory
            Создаёт пакет отчётов в каталоге out_dir
        report_service
            Сервис вывода результатов в консоль
        """
        self.runtime_context = runtime_context
        self.services = services
        self.symbol_loader = symbol_loader
        self.bundle_factory = bundle_factory
        self.report_service = report_service

    def run(self) -> list[AnalysisReport]:
        """Выполняет подкоманду и возвращает её отчёты.

        Общая последовательность:
        1) Построить уровни (level / levels) — до любых вычислений.
        2) Запустить сервис подкоманды (уровни — параллельно, SPECTRA_THREADS).
        3) Записать отчёты в пакет по одному и завершить manifest.json.
        4) Вывести таблицы и сводку (или JSON при --json).
        """
        command = self.runtime_context.command
        config = self.runtime_context.app
        service = self.services.get(command)
        if service is None:
            raise ConfigError(f"Подкоманда {command.value} не поддерживается")

        levels = self._levels()
        started = datetime.now(timezone.utc).isoformat()
        logger.info("Начало работы: {} ({} уровней)", command.value, len(levels))

        reports = service.run(AnalysisInput(self.runtime_context, levels, self.symbol_loader))

        bundle_dir: str | None = None
        if command not in _READ_ONLY:
            out_dir = Path(config.out_dir or "spectra-out")
            bundle = self.bundle_factory(out_dir)
            for report in reports:
                bundle.write_report(report)
            bundle.finalize(
                config.echo() | {"command": command.value},
                {"started": started, "finished": datetime.now(timezone.utc).isoformat()},
            )
            bundle_dir = out_dir.as_posix()

        self.report_service.run(
            ReportInput(context=self.runtime_context, reports=tuple(reports), bundle_dir=bundle_dir)
        )
        return reports

    def _levels(self) -> tuple[GroupLevel, ...]:
        config = self.runtime_context.app
        numbers = config.level_numbers
        if not numbers:
            if self.runtime_context.command in _READ_ONLY:
                return ()
            raise ConfigError("Не задан уровень: level или levels")
        descriptor = config.descriptor
        return tuple(make_level(descriptor, N) for N in numbers)
