"""Сервис вывода результатов в консоль.

`DefaultReportService`:
— в обычном режиме печатает таблицы отчётов и сводку с вердиктами (rich),
— при ``--json`` пишет в stdout один JSON-документ с полезной нагрузкой всех отчётов,
— раскрашивает уровни статуса (`StatusReport`) через rich markup.
"""

import sys

from loguru import logger
from rich.console import Console
from rich.table import Table

from SPECTRA_APP.ADAPTERS.bundle import csv_cell, dumps
from SPECTRA_APP.APP.dto import AnalysisReport, ReportInput, ReportItem, ReportItems
from SPECTRA_APP.APP.types import StatusReport, Verdict

# Строк таблицы отчёта в консоли; полная таблица в CSV пакета
MAX_ROWS = 20
MAX_SUMMARY = 6

_VERDICT_STATUS = {
    Verdict.STABLE: StatusReport.IMPORTANT_INFO,
    Verdict.BOUNDED: StatusReport.IMPORTANT_INFO,
    Verdict.DECAYING: StatusReport.IMPORTANT_INFO,
    Verdict.SECTORIAL: StatusReport.IMPORTANT_INFO,
    Verdict.RESOLVENT: StatusReport.IMPORTANT_INFO,
    Verdict.HOLDS: StatusReport.IMPORTANT_INFO,
    Verdict.UNSTABLE: StatusReport.WARNING,
    Verdict.UNBOUNDED: StatusReport.WARNING,
    Verdict.NON_DECAYING: StatusReport.WARNING,
    Verdict.NOT_SECTORIAL: StatusReport.WARNING,
    Verdict.FREDHOLM_SPECTRUM: StatusReport.WARNING,
    Verdict.FAILS: StatusReport.ERROR,
    Verdict.REPORTED: StatusReport.INFO,
}


def report_item(report: AnalysisReport) -> ReportItem:
    """Строка сводки: операция/уровень, статус по вердикту и первые скаляры summary."""
    status = _VERDICT_STATUS[report.verdict] if report.verdict is not None else StatusReport.INFO
    scalars = [
        f"{key}={csv_cell(value)}"
        for key, value in sorted(report.summary.items())
        if not isinstance(value, (dict, list, tuple))
    ][:MAX_SUMMARY]
    if report.verdict is not None:
        scalars.insert(0, report.verdict.value)
    return ReportItem(name=f"{report.op} {report.location}", status=status, comment="; ".join(scalars))


class DefaultReportService:
    """Выводит результаты подкоманды: таблицы rich или JSON в stdout."""

    def run(self, data: ReportInput) -> None:
        if data.context.output_json:
            self.output_json(data)
            return

        # Фиксируем ширину консоли, чтобы таблица не "плясала" при разных терминалах.
        console = Console(width=119)
        for report in data.reports:
            if report.table is not None and report.table.rows:
                self.output_table(console, report)

        items: ReportItems = [report_item(r) for r in data.reports] + list(data.items)
        self.output_resume(console, items, data.bundle_dir)
        if items:
            self.output_report(console, items)

    def output_json(self, data: ReportInput) -> None:
        document = {
            "bundle": data.bundle_dir,
            "reports": [report.payload() for report in data.reports],
        }
        sys.stdout.write(dumps(document))
        sys.stdout.flush()

    def output_table(self, console: Console, report: AnalysisReport) -> None:
        assert report.table is not None
        table = Table(title=f"{report.op} {report.location}")
        for column in report.table.header:
            table.add_column(column)
        for row in report.table.rows[:MAX_ROWS]:
            table.add_row(*(csv_cell(value) for value in row))
        console.print(table)
        hidden = len(report.table.rows) - MAX_ROWS
        if hidden > 0:
            console.print(f"… ещё строк: {hidden} (полная таблица — в CSV)")

    def output_resume(self, console: Console, items: ReportItems, bundle_dir: str | None) -> None:
        failed = [i for i in items if i.status in (StatusReport.ERROR, StatusReport.FATAL)]
        if failed:
            logger.warning("Проверки не выполнены: {}", len(failed))
            console.print(f"[bright_yellow]Проверки не выполнены: {len(failed)}.[/bright_yellow]")
        else:
            logger.info("Выполнено")
            console.print("[green]Выполнено.[/green]")
        if bundle_dir is not None:
            console.print(f"Пакет отчётов: {bundle_dir}")

    def output_report(self, console: Console, items: ReportItems) -> None:
        table = Table()
        table.add_column("Name", width=30)
        table.add_column("Status", width=20)
        table.add_column("Comment", width=70)
        for row in items:
            table.add_row(row.name, self.get_formatted_status(row.status), row.comment)
        console.print(table)

    def get_formatted_status(self, status: StatusReport) -> str:
        """Возвращает строку статуса с rich-разметкой для цвета."""
        colors = {
            StatusReport.INFO: "green",
            StatusReport.IMPORTANT_INFO: "bold green",
            StatusReport.WARNING: "bright_yellow",
            StatusReport.ERROR: "red",
            StatusReport.FATAL: "bold red",
        }
        color = colors.get(status, "bold red")
        return f"[{color}]{status.name}[/{color}]"
