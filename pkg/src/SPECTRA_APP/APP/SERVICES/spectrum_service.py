"""
spectrum_service.py

Спектральные подкоманды: spectrum, svd, schatten, dixmier, lorentz, nuclear,
hs-identity, sandwich.

Для уровней с M > matrix_cap подкоманды schatten, dixmier и lorentz работают по
упорядоченным L²-нормам столбцов символа вместо s-чисел плотной матрицы
(summary.spectrum_source = "column_norms").
"""

import math

import numpy as np
from loguru import logger

from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport
from SPECTRA_APP.APP.SERVICES.common import base_inputs, per_level, table
from SPECTRA_APP.APP.types import Subcommand, Verdict
from SPECTRA_APP.CORE.calculus import assemble
from SPECTRA_APP.CORE.group_model import GroupLevel, level_structure
from SPECTRA_APP.CORE.spectral import (
    SingularSpectrum,
    column_norm_spectrum,
    column_norms,
    dixmier_functional,
    eigenvalues,
    hs_identity_check,
    lorentz_norm,
    nuclear_bound,
    sandwich_check,
    schatten_norm,
    singular_values,
    symbol_schatten_functional,
)
from SPECTRA_APP.CORE.symbols import SymbolGrid


def singular_spectrum(sigma: SymbolGrid, max_size: int) -> tuple[SingularSpectrum, str]:
    """s-числа T_σ или, если матрица больше max_size, нормы столбцов символа."""
    if sigma.level.M <= max_size:
        return singular_values(assemble(sigma, max_size)), "svd"
    logger.info("M={} > {}: спектр по нормам столбцов символа", sigma.level.M, max_size)
    return column_norm_spectrum(sigma), "column_norms"


class DefaultSpectrumService:
    def __init__(self) -> None:
        self._handlers = {
            Subcommand.SPECTRUM: self.spectrum,
            Subcommand.SVD: self.svd,
            Subcommand.SCHATTEN: self.schatten,
            Subcommand.DIXMIER: self.dixmier,
            Subcommand.LORENTZ: self.lorentz,
            Subcommand.NUCLEAR: self.nuclear,
            Subcommand.HS_IDENTITY: self.hs_identity,
            Subcommand.SANDWICH: self.sandwich,
        }

    def run(self, data: AnalysisInput) -> list[AnalysisReport]:
        handler = self._handlers[data.context.command]
        return per_level(data, lambda level: handler(data, level))

    def spectrum(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        sigma = data.symbols.load(level)
        spectrum = eigenvalues(assemble(sigma, data.context.app.matrix_cap))
        rows = ((k, v.real, v.imag, abs(v)) for k, v in enumerate(spectrum.values))
        return AnalysisReport(
            op=Subcommand.SPECTRUM.value,
            level=level,
            inputs=base_inputs(data),
            table=table(("k", "re", "im", "abs"), rows),
            summary={"spectral_radius": float(np.abs(spectrum.values).max(initial=0.0))},
        )

    def svd(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        sigma = data.symbols.load(level)
        s = singular_values(assemble(sigma, data.context.app.matrix_cap)).s
        c = column_norm_spectrum(sigma).s
        return AnalysisReport(
            op=Subcommand.SVD.value,
            level=level,
            inputs=base_inputs(data),
            table=table(("k", "s", "column_norm"), zip(range(len(s)), s, c)),
            summary={"s_max": float(s[0]) if len(s) else 0.0, "rank": int(np.count_nonzero(s > 0))},
        )

    def schatten(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        sigma = data.symbols.load(level)
        spectrum, source = singular_spectrum(sigma, config.matrix_cap)
        norm = schatten_norm(spectrum, config.gamma)
        functional = symbol_schatten_functional(sigma, config.gamma)
        return AnalysisReport(
            op=Subcommand.SCHATTEN.value,
            level=level,
            inputs=base_inputs(data, "gamma"),
            summary={
                "schatten_norm": norm,
                "symbol_functional": functional,
                "ratio": norm / functional if functional else None,
                "spectrum_source": source,
            },
        )

    def dixmier(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        sigma = data.symbols.load(level)
        spectrum, source = singular_spectrum(sigma, data.context.app.matrix_cap)
        result = dixmier_functional(spectrum)
        return AnalysisReport(
            op=Subcommand.DIXMIER.value,
            level=level,
            inputs=base_inputs(data),
            table=table(("N", "partial_sum", "ratio"), ((r.N, r.partial, r.ratio) for r in result.rows)),
            summary={"value": result.value, "spectrum_source": source},
        )

    def lorentz(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        sigma = data.symbols.load(level)
        spectrum, source = singular_spectrum(sigma, config.matrix_cap)
        return AnalysisReport(
            op=Subcommand.LORENTZ.value,
            level=level,
            inputs=base_inputs(data, "r", "w"),
            summary={"norm": lorentz_norm(spectrum, config.r, config.w), "spectrum_source": source},
        )

    def nuclear(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        sigma = data.symbols.load(level)
        bound = nuclear_bound(sigma, config.gamma, config.r2)
        norms = column_norms(sigma, config.r2)
        shells = level_structure(level).shells
        return AnalysisReport(
            op=Subcommand.NUCLEAR.value,
            level=level,
            inputs=base_inputs(data, "gamma", "r2"),
            table=table(("k", "shell", "column_norm"), zip(range(level.M), shells, norms)),
            summary={"bound": bound, "rank": level.M},
        )

    def hs_identity(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        sigma = data.symbols.load(level)
        check = hs_identity_check(sigma, config.matrix_cap)
        holds = check.relative < config.tolerances.relative or check.delta <= config.tolerances.identity
        return AnalysisReport(
            op=Subcommand.HS_IDENTITY.value,
            level=level,
            inputs=base_inputs(data),
            summary={"lhs": check.lhs, "rhs": check.rhs, "delta": check.delta, "relative": check.relative},
            verdict=Verdict.HOLDS if holds else Verdict.FAILS,
        )

    def sandwich(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        sigma = data.symbols.load(level)
        report = sandwich_check(assemble(sigma, config.matrix_cap), sigma, config.tolerances.relative)
        return AnalysisReport(
            op=Subcommand.SANDWICH.value,
            level=level,
            inputs=base_inputs(data),
            table=table(("k", "s", "c"), zip(range(len(report.s)), report.s, report.c)),
            summary={
                "majorized": report.majorized,
                "pointwise": report.pointwise,
                "ratio": report.ratio if math.isfinite(report.ratio) else None,
                "multiplier": report.multiplier,
                "multiplier_exact": report.multiplier_exact,
            },
            verdict=report.verdict,
        )
