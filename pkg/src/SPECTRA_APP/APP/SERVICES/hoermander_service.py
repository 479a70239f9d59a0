"""
hoermander_service.py

hoermander: константы C_{αβ} класса S^m_{ρ,δ} на каждом уровне и вердикт
устойчивости по уровням. Результат — один сводный отчёт.
"""

from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport
from SPECTRA_APP.APP.SERVICES.common import base_inputs, per_level, table
from SPECTRA_APP.APP.types import Subcommand
from SPECTRA_APP.CORE.symbols import hoermander_estimate


class DefaultHoermanderService:
    def run(self, data: AnalysisInput) -> list[AnalysisReport]:
        config = data.context.app
        grids = per_level(data, data.symbols.load)
        report = hoermander_estimate(
            grids,
            config.m,
            config.rho,
            config.delta,
            config.alpha_max,
            config.beta_max,
            config.scale,
            config.tolerances.stability,
        )
        rows = (
            (level.N, alpha, beta, value)
            for level in report.per_level
            for (alpha, beta), value in sorted(level.constants.items())
        )
        return [
            AnalysisReport(
                op=Subcommand.HOERMANDER.value,
                level=None,
                inputs=base_inputs(data, "levels", "level", "m", "rho", "delta", "alpha_max", "beta_max", "scale"),
                table=table(("N", "alpha", "beta", "constant"), rows),
                summary={
                    "constants": {f"{a},{b}": c for (a, b), c in sorted(report.constants.items())},
                    "verdicts": {f"{a},{b}": v for (a, b), v in sorted(report.verdicts.items())},
                    "truncation_floor": report.truncation_floor,
                },
                verdict=report.verdict,
            )
        ]
