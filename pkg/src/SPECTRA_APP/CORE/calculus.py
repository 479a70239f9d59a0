"""calculus.py

Матрицы операторов в базисе характеров: сборка по символу, применение,
извлечение символа, остатки композиции / сопряжения / транспонирования
и операторные нормы между соболевскими пространствами (r = 2).

A[η, ξ] — коэффициент при χ_η в T χ_ξ; оба индекса в каноническом порядке.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from loguru import logger

from GENERAL.errors import LevelMismatch, MatrixTooLarge, NumericalFailure
from SPECTRA_APP.APP.types import Verdict
from SPECTRA_APP.CORE.group_model import (
    GroupLevel,
    addition_table,
    character_block,
    level_structure,
)
from SPECTRA_APP.CORE.symbols import STABILITY_TOLERANCE, SymbolGrid, level_stability
from SPECTRA_APP.CORE.transform import (
    NAIVE_BLOCK_ROWS,
    GridFunction,
    SpectrumFunction,
    forward,
    forward_columns,
    inverse,
    inverse_columns,
    naive_forward,
)

MATRIX_CAP = 1024
RESIDUAL_ORDERS = (0.0, 1.0, 2.0)
# элементы остатка меньше ROUNDOFF · max|слагаемых| считаются нулём
ROUNDOFF = 1e-12


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Плотная M×M матрица оператора уровня (только чтение)."""

    level: GroupLevel
    entries: np.ndarray
    provenance: str

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.complex128)
        M = self.level.M
        if entries.shape != (M, M):
            raise LevelMismatch(f"Матрица {entries.shape} не соответствует уровню с M={M}")
        if not np.all(np.isfinite(entries)):
            raise NumericalFailure(f"Матрица {self.provenance!r} содержит неконечные элементы")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def is_diagonal(self) -> bool:
        off = self.entries.copy()
        np.fill_diagonal(off, 0)
        return not np.any(off)

    @classmethod
    def identity(cls, level: GroupLevel) -> OperatorMatrix:
        return cls(level, np.eye(level.M, dtype=np.complex128), "identity")


def _check_cap(level: GroupLevel, max_size: int) -> None:
    if level.M > max_size:
        raise MatrixTooLarge(
            f"Плотная матрица M×M с M={level.M} превышает лимит {max_size} (matrix_cap)"
        )


def _x_spectra(sigma: SymbolGrid, workers: int) -> np.ndarray:
    """S[ζ, ξ] — x-преобразование столбцов σ; столбцы, постоянные по x, — точно."""
    values = sigma.values
    spectra = forward_columns(sigma.level, values, workers)
    constant = np.all(values == values[0:1, :], axis=0)
    if np.any(constant):
        spectra[:, constant] = 0
        spectra[0, constant] = values[0, constant]
    return spectra


def assemble(sigma: SymbolGrid, max_size: int = MATRIX_CAP, workers: int = 1) -> OperatorMatrix:
    """A[ζ+ξ, ξ] = σ̂_x(ζ; ξ)."""
    level = sigma.level
    _check_cap(level, max_size)
    logger.debug("Сборка матрицы {}×{} для {!r}", level.M, level.M, sigma.provenance)
    spectra = _x_spectra(sigma, workers)
    table = addition_table(level)
    columns = np.broadcast_to(np.arange(level.M), table.shape)
    entries = np.zeros((level.M, level.M), dtype=np.complex128)
    entries[table, columns] = spectra
    return OperatorMatrix(level, entries, f"assemble({sigma.provenance})")


def _check_same_level(a: GroupLevel, b: GroupLevel) -> None:
    if a != b:
        raise LevelMismatch(f"Разные уровни: {a} и {b}")


def apply(A: OperatorMatrix, f: GridFunction, workers: int = 1) -> GridFunction:
    """inverse(A · forward(f))."""
    _check_same_level(A.level, f.level)
    coefficients = A.entries @ forward(f, workers).values
    return inverse(SpectrumFunction(A.level, coefficients), workers)


def quantize(sigma: SymbolGrid, f: GridFunction) -> GridFunction:
    """Прямая сумма Σ_ξ σ(x, ξ) f̂(ξ) χ_ξ(x) по точной таблице характеров."""
    _check_same_level(sigma.level, f.level)
    level = sigma.level
    coefficients = naive_forward(f).values
    out = np.zeros(level.M, dtype=np.complex128)
    for start in range(0, level.M, NAIVE_BLOCK_ROWS):
        rows = np.arange(start, min(start + NAIVE_BLOCK_ROWS, level.M))
        block = character_block(level, rows)  # [ξ, x]
        out += (sigma.values[:, rows] * block.T) @ coefficients[rows]
    return GridFunction(level, out)


def extract_symbol(A: OperatorMatrix, workers: int = 1) -> SymbolGrid:
    """σ(x, ξ) = Σ_ζ A[ζ+ξ, ξ] χ_ζ(x)."""
    level = A.level
    if A.is_diagonal:
        values = np.broadcast_to(np.diag(A.entries), (level.M, level.M))
    else:
        table = addition_table(level)
        columns = np.broadcast_to(np.arange(level.M), table.shape)
        values = inverse_columns(level, A.entries[table, columns], workers)
    return SymbolGrid(level, values, f"extract({A.provenance})")


# ----------------------------
# Нормы
# ----------------------------


def largest_singular_value(entries: np.ndarray) -> float:
    if entries.size == 0 or not np.any(entries):
        return 0.0
    off = entries.copy()
    np.fill_diagonal(off, 0)
    if not np.any(off):
        return float(np.max(np.abs(np.diag(entries))))
    try:
        return float(scipy.linalg.svdvals(entries)[0])
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalFailure(f"SVD не сошлось: {e}") from e


def matmul(A: OperatorMatrix, B: OperatorMatrix) -> np.ndarray:
    """Произведение матриц; для диагональных — поэлементно, без округлений BLAS."""
    if A.is_diagonal and B.is_diagonal:
        return np.diag(np.diag(A.entries) * np.diag(B.entries))
    return A.entries @ B.entries


def sobolev_opnorm(A: OperatorMatrix, s_from: float, s_to: float) -> float:
    """‖A‖_{H^{s_from} → H^{s_to}} = σ_max(J_{s_to} A J_{−s_from})."""
    brackets = level_structure(A.level).brackets
    scaled = (brackets**s_to)[:, None] * A.entries * (brackets ** (-s_from))[None, :]
    return largest_singular_value(scaled)


# ----------------------------
# Остатки (сглаживающие операторы)
# ----------------------------


# fmt: off
@dataclass(frozen=True)
class ResidualReport:
    """Нормы остатка ‖R‖_{L²→H^s} на одном уровне."""
    kind                : str
    N                   : int
    M                   : int
    norms               : dict[float, float]
    max_abs             : float
# fmt: on


@dataclass(frozen=True, eq=False)
class Residual:
    matrix: OperatorMatrix
    report: ResidualReport


def make_residual(
    kind: str, entries: np.ndarray, level: GroupLevel, orders: Sequence[float] = RESIDUAL_ORDERS
) -> Residual:
    """Матрица остатка и её нормы L² → H^s для каждого s из orders."""
    matrix = OperatorMatrix(level, entries, kind)
    norms = {float(s): sobolev_opnorm(matrix, 0.0, s) for s in orders}
    report = ResidualReport(
        kind=kind,
        N=level.N,
        M=level.M,
        norms=norms,
        max_abs=float(np.max(np.abs(entries), initial=0.0)),
    )
    logger.debug("Остаток {} на N={}: {}", kind, level.N, norms)
    return Residual(matrix, report)


def compose_residual(
    sigma1: SymbolGrid,
    sigma2: SymbolGrid,
    orders: Sequence[float] = RESIDUAL_ORDERS,
    max_size: int = MATRIX_CAP,
) -> Residual:
    """R = T_σ1 T_σ2 − T_{σ1·σ2}."""
    _check_same_level(sigma1.level, sigma2.level)
    product = sigma1.with_values(
        sigma1.values * sigma2.values, f"({sigma1.provenance})*({sigma2.provenance})"
    )
    A1 = assemble(sigma1, max_size)
    A2 = assemble(sigma2, max_size)
    composed = matmul(A1, A2)
    expected = assemble(product, max_size).entries
    entries = composed - expected
    scale = max(float(np.max(np.abs(composed), initial=0.0)), float(np.max(np.abs(expected), initial=0.0)))
    entries[np.abs(entries) <= ROUNDOFF * scale] = 0
    return make_residual("compose", entries, sigma1.level, orders)


def adjoint_residual(
    sigma: SymbolGrid,
    orders: Sequence[float] = RESIDUAL_ORDERS,
    max_size: int = MATRIX_CAP,
) -> Residual:
    """R = (T_σ)* − T_{conj σ}."""
    A = assemble(sigma, max_size)
    conjugate = sigma.with_values(np.conj(sigma.values), f"conj({sigma.provenance})")
    entries = A.entries.conj().T - assemble(conjugate, max_size).entries
    return make_residual("adjoint", entries, sigma.level, orders)


def transpose_bilinear(A: OperatorMatrix) -> OperatorMatrix:
    """Билинейное транспонирование в базисе характеров: A^t[η, ξ] = A[−ξ, −η]."""
    negation = level_structure(A.level).negation
    return OperatorMatrix(A.level, A.entries[np.ix_(negation, negation)].T, f"({A.provenance})^t")


def reflect_symbol(sigma: SymbolGrid) -> SymbolGrid:
    """σ(x, −ξ)."""
    negation = level_structure(sigma.level).negation
    return sigma.with_values(sigma.values[:, negation], f"reflect({sigma.provenance})")


def transpose_residual(
    sigma: SymbolGrid,
    orders: Sequence[float] = RESIDUAL_ORDERS,
    max_size: int = MATRIX_CAP,
) -> Residual:
    """R = (T_σ)^t − T_{σ(x, −ξ)}."""
    At = transpose_bilinear(assemble(sigma, max_size))
    entries = At.entries - assemble(reflect_symbol(sigma), max_size).entries
    return make_residual("transpose", entries, sigma.level, orders)


def residual_stability(
    reports: Sequence[ResidualReport], tolerance: float = STABILITY_TOLERANCE
) -> Verdict:
    """bounded, если для каждого s нормы остатка устойчивы по уровням."""
    ordered = sorted(reports, key=lambda r: r.N)
    if not ordered:
        return Verdict.BOUNDED
    for s in ordered[0].norms:
        history = [r.norms[s] for r in ordered]
        if not level_stability(history, tolerance):
            logger.warning("Остаток {}: ‖R‖_(L²→H^{}) растёт по уровням: {}", ordered[0].kind, s, history)
            return Verdict.UNBOUNDED
    return Verdict.BOUNDED
