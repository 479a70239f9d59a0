"""
weyl_service.py

Подкоманды weyl, sectorial и elliptic.

Для символов, не зависящих от x, собственные значения T_σ — значения
мультипликатора: weyl берёт их без сборки матрицы, поэтому работает и на
уровнях с M > matrix_cap.
"""

import numpy as np
from loguru import logger

from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport
from SPECTRA_APP.APP.SERVICES.common import base_inputs, per_level, table
from SPECTRA_APP.APP.types import Subcommand, Verdict
from SPECTRA_APP.CORE.calculus import assemble
from SPECTRA_APP.CORE.group_model import GroupLevel
from SPECTRA_APP.CORE.spectral import (
    EigenSpectrum,
    eigenvalues,
    elliptic_check,
    sectorial_check,
    shell_aligned_grid,
    weyl_count,
    weyl_reference,
)
from SPECTRA_APP.CORE.symbols import SymbolGrid

# Допуск совпадения наклона с эталонным показателем
SLOPE_TOLERANCE = 1e-9


def operator_spectrum(sigma: SymbolGrid, max_size: int) -> EigenSpectrum:
    values = sigma.values
    if np.all(values == values[:1]):
        return EigenSpectrum(sigma.level, values[0])
    return eigenvalues(assemble(sigma, max_size))


class DefaultWeylService:
    def __init__(self) -> None:
        self._handlers = {
            Subcommand.WEYL: self.weyl,
            Subcommand.SECTORIAL: self.sectorial,
            Subcommand.ELLIPTIC: self.elliptic,
        }

    def run(self, data: AnalysisInput) -> list[AnalysisReport]:
        handler = self._handlers[data.context.command]
        reports = per_level(data, lambda level: handler(data, level))
        if data.context.command is Subcommand.WEYL and len(reports) > 1:
            reports.append(self.weyl_history(data, reports))
        return reports

    def weyl(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        sigma = data.symbols.load(level)
        spectrum = operator_spectrum(sigma, config.matrix_cap)
        reference = weyl_reference(level.descriptor.d, config.weyl_order, config.alpha)
        result = weyl_count(spectrum, shell_aligned_grid(level, config.weyl_order), reference)
        deviation = abs(result.slope - reference) if result.slope is not None else None
        verdict = Verdict.REPORTED
        if deviation is not None:
            verdict = Verdict.HOLDS if deviation <= SLOPE_TOLERANCE else Verdict.FAILS
        if verdict is Verdict.FAILS:
            logger.info("Наклон {} отличается от {} на {}", result.slope, reference, deviation)
        return AnalysisReport(
            op=Subcommand.WEYL.value,
            level=level,
            inputs=base_inputs(data, "order", "alpha"),
            table=table(("t", "count"), result.rows),
            summary={"slope": result.slope, "reference": reference, "deviation": deviation},
            verdict=verdict,
        )

    def weyl_history(self, data: AnalysisInput, reports: list[AnalysisReport]) -> AnalysisReport:
        rows = [(r.level.N, r.summary["slope"]) for r in reports if r.level is not None]
        verdicts = {r.verdict for r in reports}
        verdict = Verdict.REPORTED
        if Verdict.FAILS in verdicts:
            verdict = Verdict.FAILS
        elif verdicts == {Verdict.HOLDS}:
            verdict = Verdict.HOLDS
        return AnalysisReport(
            op=Subcommand.WEYL.value,
            level=None,
            inputs=base_inputs(data, "levels", "order", "alpha"),
            table=table(("N", "slope"), rows),
            summary={"reference": reports[-1].summary["reference"]},
            verdict=verdict,
        )

    def sectorial(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        report = sectorial_check(
            data.symbols.load(level), config.shell_min, config.tolerances.sector, config.tolerances.zero
        )
        return AnalysisReport(
            op=Subcommand.SECTORIAL.value,
            level=level,
            inputs=base_inputs(data, "shell_min"),
            summary={
                "theta1": report.theta1,
                "theta2": report.theta2,
                "width": report.width,
                "zeros": report.zeros,
            },
            verdict=report.verdict,
        )

    def elliptic(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        report = elliptic_check(data.symbols.load(level), config.m, config.shell_min, config.tolerances.zero)
        return AnalysisReport(
            op=Subcommand.ELLIPTIC.value,
            level=level,
            inputs=base_inputs(data, "m", "shell_min"),
            summary={"lower_bound": report.lower_bound},
            verdict=report.verdict,
        )
