"""
compactness_service.py

Подкоманды gohberg и fredholm.

gohberg: таблица d_σ по оболочкам, проверка оценки ‖A − K‖ ≥ граница внешней
оболочки на trials конечномерных K и, при нескольких уровнях, сводка d_σ по N.

fredholm: облака A_n по порогам оболочек, хаусдорфовы расстояния между
соседними облаками и (при заданном λ) параметрикс на внешнем пороге.
"""

import numpy as np

from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport
from SPECTRA_APP.APP.SERVICES.common import base_inputs, level_rng, per_level, table
from SPECTRA_APP.APP.types import Subcommand
from SPECTRA_APP.CORE.group_model import GroupLevel
from SPECTRA_APP.CORE.spectral import (
    compactness_verdict,
    fredholm_cloud,
    fredholm_parametrix,
    gohberg_bound_check,
    gohberg_dsigma,
    hausdorff_to_point,
)


class DefaultCompactnessService:
    def run(self, data: AnalysisInput) -> list[AnalysisReport]:
        if data.context.command is Subcommand.FREDHOLM:
            return per_level(data, lambda level: self.fredholm(data, level))
        reports = per_level(data, lambda level: self.gohberg(data, level))
        if len(reports) > 1:
            reports.append(self.gohberg_history(data, reports))
        return reports

    def gohberg(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        sigma = data.symbols.load(level)
        shells = gohberg_dsigma(sigma)
        probe = gohberg_bound_check(
            sigma, config.trials, level_rng(config.seed, level), config.matrix_cap
        )
        return AnalysisReport(
            op=Subcommand.GOHBERG.value,
            level=level,
            inputs=base_inputs(data, "trials", "seed"),
            table=table(("shell", "sup_norm"), enumerate(shells.shell_sups)),
            summary={
                "d_estimate": shells.d_estimate,
                "compactness": compactness_verdict(shells.shell_sups, config.tolerances.stability),
                "bound": probe.bound,
                "min_slack": probe.min_slack,
                "min_op_norm": min(probe.op_norms),
                "max_rank": max(probe.ranks),
            },
            verdict=probe.verdict,
        )

    def gohberg_history(self, data: AnalysisInput, reports: list[AnalysisReport]) -> AnalysisReport:
        """d_σ по уровням: свидетельство d_σ = 0 (компактность на L²)."""
        history = [(r.level.N, r.summary["d_estimate"]) for r in reports if r.level is not None]
        estimates = [d for _, d in history]
        return AnalysisReport(
            op=Subcommand.GOHBERG.value,
            level=None,
            inputs=base_inputs(data, "levels"),
            table=table(("N", "d_estimate"), history),
            summary={"d_estimate": estimates[-1]},
            verdict=compactness_verdict(estimates, data.context.app.tolerances.stability),
        )

    def fredholm(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        sigma = data.symbols.load(level)
        cutoffs = config.cutoffs if config.cutoffs is not None else list(range(level.shell_count))
        cloud = fredholm_cloud(sigma, cutoffs, config.tolerances.hausdorff)
        gaps = list(cloud.distances) + [None]
        rows = (
            (n, len(cloud.clouds[n]), hausdorff_to_point(cloud.clouds[n], 0), gap)
            for n, gap in zip(cloud.cutoffs, gaps)
        )
        summary = {
            "nested": cloud.nested,
            "stabilized": cloud.stabilized,
            "spec_f": [complex(v) for v in cloud.spec_f],
            "spec_f_radius": float(np.abs(cloud.spec_f).max(initial=0.0)),
        }
        verdict = None
        lam = config.lam_value
        if lam is not None:
            parametrix = fredholm_parametrix(
                sigma,
                lam,
                cloud.cutoffs[-1],
                config.sobolev_orders,
                config.tolerances.hausdorff,
                config.matrix_cap,
            )
            summary["parametrix"] = {
                "lam": parametrix.lam,
                "cutoff": parametrix.cutoff,
                "distance": parametrix.distance,
                "residual": parametrix.residual,
            }
            verdict = parametrix.verdict
        return AnalysisReport(
            op=Subcommand.FREDHOLM.value,
            level=level,
            inputs=base_inputs(data, "cutoffs", "lam"),
            table=table(("cutoff", "size", "sup_modulus", "hausdorff_next"), rows),
            summary=summary,
            verdict=verdict,
        )
