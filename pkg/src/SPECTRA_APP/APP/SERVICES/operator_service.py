"""
operator_service.py

Подкоманды assemble и apply.

assemble: плотная матрица T_σ в базисе характеров, проверка восстановления
символа (extract_symbol ∘ assemble) и тождества Парсеваля по столбцам.

apply: T_σ f через быструю матрицу и прямой суммой квантования; расхождение
двух путей попадает в summary.
"""

import numpy as np

from GENERAL.errors import ConfigError, LevelMismatch
from SPECTRA_APP.ADAPTERS.persist import load_function
from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport
from SPECTRA_APP.APP.SERVICES.common import base_inputs, per_level, table
from SPECTRA_APP.APP.SERVICES.symbol_loader import expression_function
from SPECTRA_APP.APP.types import Subcommand
from SPECTRA_APP.CORE.calculus import apply, assemble, extract_symbol, quantize
from SPECTRA_APP.CORE.group_model import GroupLevel
from SPECTRA_APP.CORE.transform import GridFunction


class DefaultOperatorService:
    def run(self, data: AnalysisInput) -> list[AnalysisReport]:
        if data.context.command is Subcommand.APPLY:
            return per_level(data, lambda level: self.apply(data, level))
        return per_level(data, lambda level: self.assemble(data, level))

    def assemble(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        sigma = data.symbols.load(level)
        A = assemble(sigma, config.matrix_cap)
        restored = extract_symbol(A)
        column_l2 = np.linalg.norm(A.entries, axis=0)
        symbol_l2 = np.sqrt(np.mean(np.abs(sigma.values) ** 2, axis=0))
        return AnalysisReport(
            op=Subcommand.ASSEMBLE.value,
            level=level,
            inputs=base_inputs(data, "matrix_cap"),
            summary={
                "M": level.M,
                "diagonal": A.is_diagonal,
                "frobenius": float(np.linalg.norm(A.entries)),
                "extract_error": float(np.max(np.abs(restored.values - sigma.values), initial=0.0)),
                "parseval_error": float(np.max(np.abs(column_l2 - symbol_l2), initial=0.0)),
                "truncation_floor": sigma.truncation_floor,
            },
            matrices={"operator": A},
        )

    def _function(self, data: AnalysisInput, level: GroupLevel) -> GridFunction:
        config = data.context.app
        if config.function_expr is not None:
            return expression_function(config.function_expr, level)
        if config.function is None:
            raise ConfigError("apply: задайте function или function_expr")
        f = load_function(config.function)
        if not isinstance(f, GridFunction):
            raise ConfigError(f"{config.function}: ожидалась функция на группе (grid_function)")
        if f.level != level:
            raise LevelMismatch(f"Функция задана на {f.level}, операция — на {level}")
        return f

    def apply(self, data: AnalysisInput, level: GroupLevel) -> AnalysisReport:
        config = data.context.app
        sigma = data.symbols.load(level)
        f = self._function(data, level)
        g = apply(assemble(sigma, config.matrix_cap), f)
        direct = quantize(sigma, f)
        rows = ((x, v.real, v.imag) for x, v in enumerate(g.values))
        return AnalysisReport(
            op=Subcommand.APPLY.value,
            level=level,
            inputs=base_inputs(data, "function", "function_expr"),
            table=table(("x_index", "re", "im"), rows),
            summary={"direct_deviation": float(np.max(np.abs(g.values - direct.values), initial=0.0))},
            functions={"input": f, "output": g},
        )
