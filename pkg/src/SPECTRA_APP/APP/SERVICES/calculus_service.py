"""
calculus_service.py

Подкоманды исчисления: compose-residual, adjoint-residual, transpose-residual,
inverse-residual и opnorm.

Каждый остаток даёт отчёт на уровень (нормы ‖R‖_{L²→H^s}, матрица R) и сводный
отчёт по уровням с вердиктом bounded / unbounded.
"""

from collections.abc import Callable
from typing import Any

from GENERAL.errors import ConfigError
from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport
from SPECTRA_APP.APP.SERVICES.common import base_inputs, level_rng, per_level, table
from SPECTRA_APP.APP.types import Subcommand
from SPECTRA_APP.CORE.calculus import (
    Residual,
    ResidualReport,
    adjoint_residual,
    assemble,
    compose_residual,
    residual_stability,
    sobolev_opnorm,
    transpose_residual,
)
from SPECTRA_APP.CORE.group_model import GroupLevel
from SPECTRA_APP.CORE.spectral import inverse_residual, op_norm_lr_probe

ResidualBuilder = Callable[[AnalysisInput, GroupLevel], Residual]


def _compose(data: AnalysisInput, level: GroupLevel) -> Residual:
    config = data.context.app
    return compose_residual(
        data.symbols.load(level),
        data.symbols.load(level, second=True),
        config.sobolev_orders,
        config.matrix_cap,
    )


def _adjoint(data: AnalysisInput, level: GroupLevel) -> Residual:
    config = data.context.app
    return adjoint_residual(data.symbols.load(level), config.sobolev_orders, config.matrix_cap)


def _transpose(data: AnalysisInput, level: GroupLevel) -> Residual:
    config = data.context.app
    return transpose_residual(data.symbols.load(level), config.sobolev_orders, config.matrix_cap)


def _inverse(data: AnalysisInput, level: GroupLevel) -> Residual:
    config = data.context.app
    lam = config.lam_value
    if lam is None:
        raise ConfigError("inverse-residual: не задано λ (lam)")
    return inverse_residual(
        data.symbols.load(level), lam, config.sobolev_orders, config.tolerances.zero, config.matrix_cap
    )


_BUILDERS: dict[Subcommand, tuple[ResidualBuilder, tuple[str, ...]]] = {
    Subcommand.COMPOSE_RESIDUAL: (_compose, ("sobolev_orders",)),
    Subcommand.ADJOINT_RESIDUAL: (_adjoint, ("sobolev_orders",)),
    Subcommand.TRANSPOSE_RESIDUAL: (_transpose, ("sobolev_orders",)),
    Subcommand.INVERSE_RESIDUAL: (_inverse, ("sobolev_orders", "lam")),
}


class DefaultCalculusService:
    def run(self, data: AnalysisInput) -> list[AnalysisReport]:
        command = data.context.command
        if command is Subcommand.OPNORM:
            return per_level(data, lambda level: self.opnorm(data, level))

        builder, keys = _BUILDERS[command]
        inputs = base_inputs(data, *keys, second=command is Subcommand.COMPOSE_RESIDUAL)
        residuals = per_level(data, lambda level: builder(data, level))
        reports = [
            AnalysisReport(
                op=command.value,
                level=residual.matrix.level,
                inputs=inputs,
                table=table(("s", "norm"), residual.report.norms.items()),
                summary={"max_abs": residual.report.max_abs, "norms": residual.report.norms},
                matrices={"residual": residual.matrix},
            )
            for residual in residuals
        ]
        reports.append(self.stability(data, command, inputs, [r.report for r in residuals]))
        return reports

    def stability(
        self,
        data: AnalysisInput,
        command: Subcommand,
        inputs: dict[str, Any],
        history: list[ResidualReport],
    ) -> AnalysisReport:
        """Нормы остатка по уровням и вердикт ограниченности."""
        orders = list(history[0].norms) if history else []
        rows = ((h.N, *(h.norms[s] for s in orders)) for h in history)
        return AnalysisReport(
            op=command.value,
            level=None,
            inputs={**inputs, "levels": [h.N for h in history]},
            table=table(("N", *(f"s={s}" for s in orders)), rows),
            summary={"max_norm": {s: max(h.norms[s] for h in history) for s in orders}},
            verdict=residual_stability(history, data.context.app.tolerances.stability),
        )

    def opnorm(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        A = assemble(data.symbols.load(level), config.matrix_cap)
        probe = op_norm_lr_probe(A, config.r, config.trials, level_rng(config.seed, level))
        return AnalysisReport(
            op=Subcommand.OPNORM.value,
            level=level,
            inputs=base_inputs(data, "s_from", "s_to", "r", "trials", "seed"),
            summary={
                "sobolev_norm": sobolev_opnorm(A, config.s_from, config.s_to),
                "lr_lower_bound": probe.lower_bound,
                "lr_character_bound": probe.character_bound,
                "lr_random_bound": probe.random_bound,
            },
        )
