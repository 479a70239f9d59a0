"""transform.py

Преобразование Фурье на уровне N и связанные нормы.

Быстрый путь — многомерное смешанно-основное БПФ (`scipy.fft.fftn`) по
решётке уровня (оси из :attr:`GroupLevel.axes`) с последующей перестановкой
DFT-индексов в канонический порядок двойственных индексов. Эталонный путь
(:func:`naive_forward`) считает двойную сумму по точной таблице характеров.

Соглашения:
    f̂(ξ) = (1/M) Σ_x f(x)·conj χ_ξ(x),     f(x) = Σ_ξ f̂(ξ)·χ_ξ(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
from loguru import logger

from GENERAL.errors import BadExponent, LevelMismatch
from SPECTRA_APP.APP.types import Scale
from SPECTRA_APP.CORE.group_model import GroupLevel, character_block, level_structure

NAIVE_BLOCK_ROWS = 256


def _as_level_vector(level: GroupLevel, values: object, what: str) -> np.ndarray:
    array = np.array(values, dtype=np.complex128).reshape(-1)
    if array.shape != (level.M,):
        raise LevelMismatch(f"{what}: длина {array.shape[0]} не равна M={level.M}")
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Функция на точках уровня (вес Хаара 1/M)."""

    level: GroupLevel
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_level_vector(self.level, self.values, "GridFunction"))

    @property
    def haar_weight(self) -> float:
        return 1.0 / self.level.M

    @classmethod
    def constant(cls, level: GroupLevel, value: complex = 1.0) -> GridFunction:
        return cls(level, np.full(level.M, value, dtype=np.complex128))


@dataclass(frozen=True, eq=False)
class SpectrumFunction:
    """Функция на двойственных индексах уровня (канонический порядок)."""

    level: GroupLevel
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", _as_level_vector(self.level, self.values, "SpectrumFunction")
        )

    @classmethod
    def delta(cls, level: GroupLevel, position: int = 0) -> SpectrumFunction:
        values = np.zeros(level.M, dtype=np.complex128)
        values[position] = 1.0
        return cls(level, values)


# ----------------------------
# Пакетные преобразования по столбцам
# ----------------------------


def forward_columns(level: GroupLevel, values: np.ndarray, workers: int = 1) -> np.ndarray:
    """Прямое преобразование каждого столбца (строки — точки, результат — канонический порядок)."""
    structure = level_structure(level)
    columns = values.shape[1]
    cube = np.asarray(values, dtype=np.complex128).reshape(level.axes + (columns,))
    axes = tuple(range(len(level.axes)))
    spectrum = scipy.fft.fftn(cube, axes=axes, norm="forward", workers=workers)
    return spectrum.reshape(level.M, columns)[structure.dft]


def inverse_columns(level: GroupLevel, spectra: np.ndarray, workers: int = 1) -> np.ndarray:
    """Обратное преобразование столбцов, заданных в каноническом порядке."""
    structure = level_structure(level)
    columns = spectra.shape[1]
    by_dft = np.empty((level.M, columns), dtype=np.complex128)
    by_dft[structure.dft] = spectra
    cube = by_dft.reshape(level.axes + (columns,))
    axes = tuple(range(len(level.axes)))
    values = scipy.fft.ifftn(cube, axes=axes, norm="forward", workers=workers)
    return values.reshape(level.M, columns)


def forward(f: GridFunction, workers: int = 1) -> SpectrumFunction:
    return SpectrumFunction(f.level, forward_columns(f.level, f.values[:, None], workers)[:, 0])


def inverse(phi: SpectrumFunction, workers: int = 1) -> GridFunction:
    return GridFunction(
        phi.level, inverse_columns(phi.level, phi.values[:, None], workers)[:, 0]
    )


def naive_forward_columns(level: GroupLevel, values: np.ndarray) -> np.ndarray:
    """Прямая двойная сумма O(M²) по точной таблице характеров для каждого столбца."""
    values = np.asarray(values, dtype=np.complex128)
    out = np.empty((level.M, values.shape[1]), dtype=np.complex128)
    for start in range(0, level.M, NAIVE_BLOCK_ROWS):
        rows = np.arange(start, min(start + NAIVE_BLOCK_ROWS, level.M))
        out[rows] = np.conj(character_block(level, rows)) @ values
    return out / level.M


def naive_forward(f: GridFunction) -> SpectrumFunction:
    return SpectrumFunction(f.level, naive_forward_columns(f.level, f.values[:, None])[:, 0])


# ----------------------------
# Нормы
# ----------------------------


def _check_exponent(r: float) -> None:
    if math.isnan(r) or r < 1:
        raise BadExponent(f"Показатель r={r} должен быть ≥ 1 или ∞")


def lr_norm(f: GridFunction, r: float) -> float:
    _check_exponent(r)
    moduli = np.abs(f.values)
    if math.isinf(r):
        return float(moduli.max())
    return float(np.mean(moduli**r) ** (1.0 / r))


def sobolev_weights(level: GroupLevel, s: float, scale: Scale = Scale.BRACKET) -> np.ndarray:
    """Множитель ⟨ξ⟩^s или ‖ξ‖^s (0^s ≔ 0, при s=0 — единица) в каноническом порядке."""
    structure = level_structure(level)
    if scale is Scale.BRACKET:
        return structure.brackets**s
    if s == 0:
        return np.ones(level.M)
    norms = structure.norms
    weights = np.zeros(level.M)
    nonzero = norms > 0
    weights[nonzero] = norms[nonzero] ** s
    return weights


def sobolev_apply(f: GridFunction, s: float, scale: Scale = Scale.BRACKET) -> GridFunction:
    spectrum = forward(f).values * sobolev_weights(f.level, s, scale)
    return inverse(SpectrumFunction(f.level, spectrum))


def sobolev_norm(f: GridFunction, s: float, r: float) -> float:
    return lr_norm(sobolev_apply(f, s, Scale.BRACKET), r)


def shell_projections(f: GridFunction) -> np.ndarray:
    """Столбец j — частичная сумма по оболочке j (j = 0 — только ξ = 0)."""
    level = f.level
    shells = level_structure(level).shells
    spectrum = forward(f).values
    masked = np.zeros((level.M, level.shell_count), dtype=np.complex128)
    for j in range(level.shell_count):
        in_shell = shells == j
        masked[in_shell, j] = spectrum[in_shell]
    return inverse_columns(level, masked)


def square_function(f: GridFunction) -> GridFunction:
    """Квадратичная функция Литлвуда–Пэли по оболочкам ‖ξ‖ = p^j."""
    projections = shell_projections(f)
    return GridFunction(f.level, np.sqrt(np.sum(np.abs(projections) ** 2, axis=1)))


def square_function_ratio(f: GridFunction, r: float) -> float:
    """‖Sf‖_r / ‖f‖_r — эмпирическая константа Литлвуда–Пэли для f."""
    denominator = lr_norm(f, r)
    if denominator == 0:
        return 0.0
    return lr_norm(square_function(f), r) / denominator


def embedding_constant(level: GroupLevel, s: float, r: float, strict: bool = True) -> float:
    """(Σ_ξ ⟨ξ⟩^{−s r})^{1/r} — константа вложения H^s_r ⊂ L^∞ на уровне N."""
    _check_exponent(r)
    d = level.descriptor.d
    if math.isinf(r):
        critical_ok = s > 0
    else:
        critical_ok = s > d / r
    if not critical_ok:
        message = f"s={s} ≤ d/r={d}/{r}: константа расходится при N → ∞"
        if strict:
            raise BadExponent(message)
        logger.warning(message)

    brackets = level_structure(level).brackets
    if math.isinf(r):
        return float(np.max(brackets ** (-s)))
    return float(np.sum(brackets ** (-s * r)) ** (1.0 / r))
