"""spectral.py

Спектральный анализ операторов уровня: сингулярные и собственные числа,
функционалы Шаттена, Диксмье, Лоренца, γ-ядерная оценка, расстояние Гохберга,
«сэндвич» сингулярных чисел, облака фредгольмова спектра, считающая функция
Вейля, секториальность, эллиптичность и остаток обратного символа.

Все отчёты — неизменяемые dataclass; вердикты на конечном уровне являются
эмпирическими свидетельствами, а не доказательствами.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from loguru import logger
from scipy.spatial.distance import directed_hausdorff

from GENERAL.errors import (
    BadExponent,
    EmptyGrid,
    LevelMismatch,
    NumericalFailure,
    SingularMatrix,
    SymbolZero,
)
from SPECTRA_APP.APP.types import Verdict
from SPECTRA_APP.CORE.calculus import (
    MATRIX_CAP,
    RESIDUAL_ORDERS,
    OperatorMatrix,
    Residual,
    assemble,
    largest_singular_value,
    make_residual,
    matmul,
)
from SPECTRA_APP.CORE.group_model import GroupLevel, PointIndex, dual_enumerate, level_structure
from SPECTRA_APP.CORE.symbols import STABILITY_TOLERANCE, SymbolGrid
from SPECTRA_APP.CORE.transform import GridFunction, forward_columns, inverse_columns, lr_norm

HAUSDORFF_TOLERANCE = 1e-6
SECTOR_TOLERANCE = 1e-12
SANDWICH_TOLERANCE = 1e-10
SINGULAR_CONDITION = 1e14


# ----------------------------
# Спектры
# ----------------------------


@dataclass(frozen=True, eq=False)
class SingularSpectrum:
    """s_0 ≥ s_1 ≥ … ≥ 0."""

    level: GroupLevel
    s: np.ndarray

    def __post_init__(self) -> None:
        s = np.array(self.s, dtype=np.float64).reshape(-1)
        if np.any(s < 0) or np.any(np.diff(s) > 0):
            raise NumericalFailure("Сингулярные числа должны быть неотрицательны и не возрастать")
        s.flags.writeable = False
        object.__setattr__(self, "s", s)

    @classmethod
    def from_values(cls, level: GroupLevel, values: np.ndarray) -> SingularSpectrum:
        """Сортирует модули значений по убыванию."""
        return cls(level, np.sort(np.abs(np.asarray(values)).reshape(-1))[::-1])


@dataclass(frozen=True, eq=False)
class EigenSpectrum:
    """Собственные значения по убыванию модуля (устойчивая сортировка)."""

    level: GroupLevel
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.complex128).reshape(-1)
        order = np.argsort(-np.abs(values), kind="stable")
        values = values[order]
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def singular_values(A: OperatorMatrix) -> SingularSpectrum:
    if A.is_diagonal:
        return SingularSpectrum.from_values(A.level, np.diag(A.entries))
    try:
        s = scipy.linalg.svdvals(A.entries)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalFailure(f"SVD не сошлось для {A.provenance!r}: {e}") from e
    return SingularSpectrum(A.level, np.maximum(s, 0.0))


def eigenvalues(A: OperatorMatrix) -> EigenSpectrum:
    if A.is_diagonal:
        return EigenSpectrum(A.level, np.diag(A.entries))
    try:
        values = scipy.linalg.eigvals(A.entries)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalFailure(f"Собственные числа не найдены для {A.provenance!r}: {e}") from e
    return EigenSpectrum(A.level, values)


# ----------------------------
# Нормы столбцов символа
# ----------------------------


def _check_r(r: float, low: float = 1.0) -> None:
    if math.isnan(r) or r < low:
        raise BadExponent(f"Показатель {r} должен быть ≥ {low}")


def column_norms(sigma: SymbolGrid, r: float = 2.0) -> np.ndarray:
    """‖σ(·, ξ)‖_{L^r} для каждого ξ (канонический порядок)."""
    _check_r(r)
    moduli = np.abs(sigma.values)
    if math.isinf(r):
        return moduli.max(axis=0)
    return np.mean(moduli**r, axis=0) ** (1.0 / r)


def column_norm_spectrum(sigma: SymbolGrid) -> SingularSpectrum:
    """Упорядоченные L²-нормы столбцов; эквивалентны s-числам по порядку роста."""
    return SingularSpectrum.from_values(sigma.level, column_norms(sigma, 2.0))


def schatten_norm(spectrum: SingularSpectrum, gamma: float) -> float:
    _check_r(gamma)
    if math.isinf(gamma):
        return float(spectrum.s.max(initial=0.0))
    return float(np.sum(spectrum.s**gamma) ** (1.0 / gamma))


def symbol_schatten_functional(sigma: SymbolGrid, gamma: float) -> float:
    """(Σ_ξ ‖σ(·, ξ)‖_{L^γ}^γ)^{1/γ}."""
    _check_r(gamma)
    norms = column_norms(sigma, gamma)
    if math.isinf(gamma):
        return float(norms.max(initial=0.0))
    return float(np.sum(norms**gamma) ** (1.0 / gamma))


# fmt: off
@dataclass(frozen=True)
class HSIdentity:
    lhs                 : float
    rhs                 : float
    delta               : float
# fmt: on

    @property
    def relative(self) -> float:
        return self.delta / self.lhs if self.lhs else self.delta


def hs_identity_check(sigma: SymbolGrid, max_size: int = MATRIX_CAP) -> HSIdentity:
    """‖T_σ‖²_HS против Σ_ξ ‖σ(·, ξ)‖²_{L²}."""
    entries = assemble(sigma, max_size).entries
    lhs = float(np.sum(np.abs(entries) ** 2))
    rhs = float(np.sum(np.mean(np.abs(sigma.values) ** 2, axis=0)))
    return HSIdentity(lhs=lhs, rhs=rhs, delta=abs(lhs - rhs))


# ----------------------------
# Диксмье, Лоренц, γ-ядерность
# ----------------------------


@dataclass(frozen=True)
class DixmierRow:
    N: int
    partial: float
    ratio: float


@dataclass(frozen=True)
class DixmierResult:
    value: float
    rows: tuple[DixmierRow, ...]


def dixmier_functional(spectrum: SingularSpectrum) -> DixmierResult:
    """sup_{1 ≤ N ≤ max(1, M−1)} (1/log(1+N)) Σ_{k≤N} s_k."""
    s = spectrum.s
    partial = np.cumsum(s)
    rows = []
    for N in range(1, max(1, len(s) - 1) + 1):
        total = float(partial[min(N, len(s) - 1)]) if len(s) else 0.0
        rows.append(DixmierRow(N, total, total / math.log1p(N)))
    return DixmierResult(max(row.ratio for row in rows), tuple(rows))


def lorentz_norm(spectrum: SingularSpectrum, r: float, w: float) -> float:
    """(Σ_{k≥1} [k^{1/r − 1/w} s_{k−1}]^w)^{1/w}; при w = ∞ — sup_k k^{1/r} s_{k−1}."""
    if not r > 0 or not w > 0:
        raise BadExponent(f"Требуется r, w > 0: r={r}, w={w}")
    s = spectrum.s
    k = np.arange(1, len(s) + 1, dtype=np.float64)
    if math.isinf(w):
        return float(np.max(k ** (1.0 / r) * s, initial=0.0))
    terms = k ** (1.0 / r - 1.0 / w) * s
    return float(np.sum(terms**w) ** (1.0 / w))


def nuclear_bound(sigma: SymbolGrid, gamma: float, r2: float) -> float:
    """Σ_ξ ‖σ(·, ξ)‖_{L^{r2}}^γ — сертификат γ-ядерности."""
    if not 0 < gamma <= 1:
        raise BadExponent(f"γ={gamma} должно лежать в (0, 1]")
    _check_r(r2)
    return float(np.sum(column_norms(sigma, r2) ** gamma))


# ----------------------------
# Компактность: Гохберг
# ----------------------------


@dataclass(frozen=True)
class GohbergTable:
    """shell_sups[j] = max_{ξ в оболочке j} ‖σ(·, ξ)‖_{L^∞}."""

    shell_sups: tuple[float, ...]
    d_estimate: float


def gohberg_dsigma(sigma: SymbolGrid) -> GohbergTable:
    shells = level_structure(sigma.level).shells
    sups = column_norms(sigma, math.inf)
    table = tuple(float(sups[shells == j].max(initial=0.0)) for j in range(sigma.level.shell_count))
    return GohbergTable(shell_sups=table, d_estimate=table[-1])


def compactness_verdict(shell_sups: Sequence[float], tolerance: float = STABILITY_TOLERANCE) -> Verdict:
    """decaying, если внешняя оболочка нулевая или убывает на долю ≥ tolerance."""
    values = [float(v) for v in shell_sups]
    if not values:
        return Verdict.NON_DECAYING
    if values[-1] == 0:
        return Verdict.DECAYING
    if len(values) >= 2 and values[-1] < values[-2] * (1.0 - tolerance):
        return Verdict.DECAYING
    return Verdict.NON_DECAYING


# fmt: off
@dataclass(frozen=True)
class GohbergProbe:
    bound               : float
    op_norms            : tuple[float, ...]
    ranks               : tuple[int, ...]
    min_slack           : float
    verdict             : Verdict
# fmt: on


def gohberg_bound_check(
    sigma: SymbolGrid,
    trials: int,
    rng: np.random.Generator,
    max_size: int = MATRIX_CAP,
    tolerance: float = 1e-9,
) -> GohbergProbe:
    """Проверка ‖A − K‖ ≥ max_{ξ внешней оболочки} ‖σ(·, ξ)‖_{L²} для K, зануляющих внешние столбцы.

    Испытание 0 — K = 0, испытание 1 — K = A на внутренних оболочках, остальные —
    случайные K = U W ранга ≤ min(M/2, число внутренних столбцов).
    """
    if trials < 1:
        raise BadExponent(f"Число испытаний {trials} должно быть ≥ 1")
    A = assemble(sigma, max_size)
    level = sigma.level
    M = level.M
    outer = level_structure(level).shells == level.N
    inner_count = int(np.count_nonzero(~outer))
    bound = float(np.linalg.norm(A.entries[:, outer], axis=0).max(initial=0.0))

    op_norms: list[float] = []
    ranks: list[int] = []
    for trial in range(trials):
        if trial == 0 or inner_count == 0:
            K = np.zeros((M, M), dtype=np.complex128)
            rank = 0
        elif trial == 1:
            K = np.where(outer[None, :], 0, A.entries)
            rank = int(np.linalg.matrix_rank(K)) if M <= 256 else inner_count
        else:
            rank = int(rng.integers(1, max(1, min(M // 2, inner_count)) + 1))
            U = rng.standard_normal((M, rank)) + 1j * rng.standard_normal((M, rank))
            W = rng.standard_normal((rank, M)) + 1j * rng.standard_normal((rank, M))
            W[:, outer] = 0
            K = U @ W
        op_norms.append(largest_singular_value(A.entries - K))
        ranks.append(rank)

    min_slack = min(norm - bound for norm in op_norms)
    verdict = Verdict.HOLDS if min_slack >= -tolerance * max(1.0, bound) else Verdict.FAILS
    if verdict is Verdict.FAILS:
        logger.warning("Оценка Гохберга нарушена: минимальный запас {}", min_slack)
    return GohbergProbe(
        bound=bound,
        op_norms=tuple(op_norms),
        ranks=tuple(ranks),
        min_slack=min_slack,
        verdict=verdict,
    )


# ----------------------------
# Сэндвич s-чисел
# ----------------------------


# fmt: off
@dataclass(frozen=True, eq=False)
class SandwichReport:
    s                   : np.ndarray
    c                   : np.ndarray
    majorized           : bool
    pointwise           : bool
    ratio               : float
    multiplier          : bool
    multiplier_exact    : bool
    verdict             : Verdict
# fmt: on


def sandwich_check(
    A: OperatorMatrix, sigma: SymbolGrid, tolerance: float = SANDWICH_TOLERANCE
) -> SandwichReport:
    """Сравнивает s_k с упорядоченными L²-нормами столбцов c_k.

    Для любой матрицы выполняется мажоризация Σ_{k<K} s_k² ≥ Σ_{k<K} c_k²
    (равенство при K = M) и s_0 ≥ c_0; поточечное s_k ≥ c_k верно не всегда
    и только сообщается. Для мультипликаторов s_k = c_k.
    """
    if A.level != sigma.level:
        raise LevelMismatch(f"Разные уровни: {A.level} и {sigma.level}")
    s = singular_values(A).s
    c = column_norm_spectrum(sigma).s
    scale = max(float(s.max(initial=0.0)), float(c.max(initial=0.0)), 1e-300)
    s2, c2 = np.cumsum(s**2), np.cumsum(c**2)
    total = max(float(s2[-1]), float(c2[-1]), 1e-300)
    majorized = bool(
        np.all(s2 >= c2 - tolerance * total)
        and abs(s2[-1] - c2[-1]) <= tolerance * total
        and s[0] >= c[0] - tolerance * scale
    )
    pointwise = bool(np.all(s >= c - tolerance * scale))
    positive = c > tolerance * scale
    ratio = float(np.max(s[positive] / c[positive])) if np.any(positive) else 0.0
    multiplier = A.is_diagonal
    multiplier_exact = bool(np.all(np.abs(s - c) <= tolerance * scale)) if multiplier else False
    holds = majorized and (multiplier_exact or not multiplier)
    if not pointwise:
        logger.debug("Поточечная оценка s_k ≥ c_k не выполнена, отношение {}", ratio)
    return SandwichReport(
        s=s,
        c=c,
        majorized=majorized,
        pointwise=pointwise,
        ratio=ratio,
        multiplier=multiplier,
        multiplier_exact=multiplier_exact,
        verdict=Verdict.HOLDS if holds else Verdict.FAILS,
    )


# ----------------------------
# Фредгольмов спектр
# ----------------------------


def _points(values: np.ndarray) -> np.ndarray:
    return np.stack([values.real, values.imag], axis=1)


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Хаусдорфово расстояние между конечными множествами точек C."""
    if len(a) == 0 or len(b) == 0:
        return math.inf if len(a) != len(b) else 0.0
    forward_distance = directed_hausdorff(_points(a), _points(b))[0]
    backward_distance = directed_hausdorff(_points(b), _points(a))[0]
    return float(max(forward_distance, backward_distance))


def hausdorff_to_point(cloud: np.ndarray, z: complex) -> float:
    if len(cloud) == 0:
        return math.inf
    return float(np.max(np.abs(cloud - z)))


# fmt: off
@dataclass(frozen=True, eq=False)
class FredholmCloud:
    """A_n = {σ(x, ξ) : оболочка ξ ≥ n} для каждого n из cutoffs."""
    level               : GroupLevel
    cutoffs             : tuple[int, ...]
    clouds              : dict[int, np.ndarray]
    distances           : tuple[float, ...]
    nested              : bool
    stabilized          : bool
# fmt: on

    @property
    def spec_f(self) -> np.ndarray:
        """Приближение Spec_F — самое внешнее непустое облако."""
        for n in reversed(self.cutoffs):
            if len(self.clouds[n]):
                return self.clouds[n]
        return np.empty(0, dtype=np.complex128)


def cloud_values(sigma: SymbolGrid, cutoff: int) -> np.ndarray:
    shells = level_structure(sigma.level).shells
    return np.unique(sigma.values[:, shells >= cutoff])


def fredholm_cloud(
    sigma: SymbolGrid, cutoffs: Sequence[int], tolerance: float = HAUSDORFF_TOLERANCE
) -> FredholmCloud:
    ordered = tuple(sorted(set(int(n) for n in cutoffs)))
    if not ordered:
        raise EmptyGrid("Пустой список порогов оболочек")
    if ordered[0] < 0:
        raise BadExponent(f"Порог оболочки {ordered[0]} должен быть ≥ 0")
    clouds = {n: cloud_values(sigma, n) for n in ordered}
    distances = tuple(hausdorff(clouds[a], clouds[b]) for a, b in zip(ordered, ordered[1:]))
    nested = all(
        bool(np.all(np.isin(clouds[b], clouds[a]))) for a, b in zip(ordered, ordered[1:])
    )
    finite = [d for d in distances if math.isfinite(d)]
    stabilized = bool(finite) and finite[-1] <= tolerance
    return FredholmCloud(
        level=sigma.level,
        cutoffs=ordered,
        clouds=clouds,
        distances=distances,
        nested=nested,
        stabilized=stabilized,
    )


# fmt: off
@dataclass(frozen=True)
class ParametrixReport:
    lam                 : complex
    cutoff              : int
    distance            : float
    residual            : dict[float, float]
    verdict             : Verdict
# fmt: on


def fredholm_parametrix(
    sigma: SymbolGrid,
    lam: complex,
    cutoff: int,
    orders: Sequence[float] = RESIDUAL_ORDERS,
    tolerance: float = HAUSDORFF_TOLERANCE,
    max_size: int = MATRIX_CAP,
) -> ParametrixReport:
    """Параметрикс β = 1/(σ − λ) на оболочках ≥ cutoff и ‖T_β (T_σ − λ) − I‖_{L²→H^s}."""
    cloud = cloud_values(sigma, cutoff)
    distance = float(np.min(np.abs(cloud - lam))) if len(cloud) else math.inf
    if distance <= tolerance:
        logger.info("λ={} лежит в облаке A_{} (расстояние {})", lam, cutoff, distance)
        return ParametrixReport(lam, cutoff, distance, {}, Verdict.FREDHOLM_SPECTRUM)

    shells = level_structure(sigma.level).shells
    beta = np.zeros_like(sigma.values)
    active = shells >= cutoff
    beta[:, active] = 1.0 / (sigma.values[:, active] - lam)
    A = assemble(sigma, max_size)
    B = assemble(sigma.with_values(beta, f"parametrix({sigma.provenance})"), max_size)
    shifted = OperatorMatrix(A.level, A.entries - lam * np.eye(A.level.M), "shifted")
    entries = matmul(B, shifted) - np.eye(A.level.M)
    residual = make_residual("parametrix", entries, sigma.level, orders)
    return ParametrixReport(lam, cutoff, distance, residual.report.norms, Verdict.RESOLVENT)


# ----------------------------
# Вейль
# ----------------------------


@dataclass(frozen=True)
class WeylTable:
    rows: tuple[tuple[float, int], ...]
    slope: float | None
    reference: float | None


def weyl_reference(d: int, n: float, alpha: float = 0.0) -> float:
    """Показатель (d + α(4n − d))/n; при α = 0 — d/n."""
    if n <= 0:
        raise BadExponent(f"Порядок n={n} должен быть > 0")
    return (d + alpha * (4 * n - d)) / n


def shell_aligned_grid(level: GroupLevel, order: float) -> np.ndarray:
    """t_J = ⟨ξ⟩^order по различным значениям скобки (p^{order·J} для Z_p^d)."""
    if order <= 0:
        raise BadExponent(f"Порядок {order} должен быть > 0")
    return np.unique(level_structure(level).brackets) ** order


def weyl_count(
    spectrum: EigenSpectrum, t_grid: Sequence[float], reference: float | None = None
) -> WeylTable:
    """N(t) = #{k : |λ_k| ≤ t} и наклон МНК log N по log t."""
    grid = np.asarray(sorted(float(t) for t in t_grid))
    if grid.size == 0:
        raise EmptyGrid("Пустая сетка t для считающей функции")
    moduli = np.sort(np.abs(spectrum.values))
    counts = np.searchsorted(moduli, grid, side="right")
    rows = tuple((float(t), int(c)) for t, c in zip(grid, counts))

    usable = (counts > 0) & (grid > 0)
    slope = None
    if np.count_nonzero(usable) >= 2 and len(np.unique(grid[usable])) >= 2:
        slope = float(np.polyfit(np.log(grid[usable]), np.log(counts[usable]), 1)[0])
    return WeylTable(rows=rows, slope=slope, reference=reference)


# ----------------------------
# Секториальность и эллиптичность
# ----------------------------


# fmt: off
@dataclass(frozen=True)
class SectorReport:
    theta1              : float
    theta2              : float
    width               : float
    zeros               : int
    verdict             : Verdict
# fmt: on


def minimal_arc(angles: np.ndarray) -> tuple[float, float, float]:
    """Минимальная дуга окружности, покрывающая углы: (начало, конец, ширина)."""
    theta = np.unique(np.where(angles == -math.pi, math.pi, angles))
    if len(theta) == 1:
        return float(theta[0]), float(theta[0]), 0.0
    gaps = np.diff(theta)
    wrap = theta[0] + 2 * math.pi - theta[-1]
    i = int(np.argmax(gaps))
    if wrap >= gaps[i]:
        return float(theta[0]), float(theta[-1]), float(theta[-1] - theta[0])
    start, end = float(theta[i + 1]), float(theta[i])
    return start, end, float(end - start + 2 * math.pi)


def sectorial_check(
    sigma: SymbolGrid,
    shell_min: int,
    tolerance: float = SECTOR_TOLERANCE,
    zero: float = 0.0,
) -> SectorReport:
    """σ секториален, если аргументы его значений (оболочки ≥ shell_min) лежат в дуге < π/2."""
    shells = level_structure(sigma.level).shells
    values = sigma.values[:, shells >= shell_min].reshape(-1)
    is_zero = np.abs(values) <= zero
    nonzero = values[~is_zero]
    zeros = int(np.count_nonzero(is_zero))
    if zeros:
        logger.debug("Секториальность: исключено нулей σ: {}", zeros)
    if nonzero.size == 0:
        return SectorReport(0.0, 0.0, 0.0, zeros, Verdict.NOT_SECTORIAL)
    theta1, theta2, width = minimal_arc(np.angle(nonzero))
    verdict = Verdict.SECTORIAL if width < math.pi / 2 - tolerance else Verdict.NOT_SECTORIAL
    return SectorReport(theta1, theta2, width, zeros, verdict)


# fmt: off
@dataclass(frozen=True)
class EllipticReport:
    m                   : float
    shell_min           : int
    lower_bound         : float
    verdict             : Verdict
# fmt: on


def elliptic_check(sigma: SymbolGrid, m: float, shell_min: int, zero: float = 0.0) -> EllipticReport:
    """min |σ(x, ξ)| / ⟨ξ⟩^m по оболочкам ≥ shell_min."""
    structure = level_structure(sigma.level)
    active = structure.shells >= shell_min
    if not np.any(active):
        raise EmptyGrid(f"Нет оболочек ≥ {shell_min} на уровне {sigma.level}")
    ratios = np.abs(sigma.values[:, active]) / structure.brackets[active] ** m
    lower = float(ratios.min())
    verdict = Verdict.HOLDS if lower > zero else Verdict.FAILS
    return EllipticReport(m=m, shell_min=shell_min, lower_bound=lower, verdict=verdict)


# ----------------------------
# Обратный символ
# ----------------------------


def _inverse(B: np.ndarray) -> np.ndarray:
    off = B.copy()
    np.fill_diagonal(off, 0)
    if not np.any(off):
        diagonal = np.diag(B)
        if np.any(diagonal == 0):
            raise SingularMatrix("A − λI вырождена (нулевой диагональный элемент)")
        return np.diag(1.0 / diagonal)
    if np.linalg.cond(B) > SINGULAR_CONDITION:
        raise SingularMatrix("A − λI численно вырождена")
    try:
        return scipy.linalg.inv(B)
    except np.linalg.LinAlgError as e:
        raise SingularMatrix(f"A − λI вырождена: {e}") from e


def inverse_residual(
    sigma: SymbolGrid,
    lam: complex,
    orders: Sequence[float] = RESIDUAL_ORDERS,
    zero: float = 0.0,
    max_size: int = MATRIX_CAP,
) -> Residual:
    """R = (T_σ − λ)^{-1} − T_{1/(σ − λ)}."""
    shifted = sigma.values - lam
    vanishing = np.abs(shifted) <= zero
    if np.any(vanishing):
        x, c = (int(i[0]) for i in np.nonzero(vanishing))
        point = PointIndex.from_flat(sigma.level, x)
        xi = dual_enumerate(sigma.level)[c]
        raise SymbolZero(f"σ − λ обращается в ноль в узле x={point.digits}, ξ={xi}")
    A = assemble(sigma, max_size)
    inverse_matrix = _inverse(A.entries - lam * np.eye(A.level.M))
    reciprocal = sigma.with_values(1.0 / shifted, f"1/({sigma.provenance} - {lam})")
    entries = inverse_matrix - assemble(reciprocal, max_size).entries
    return make_residual("inverse", entries, sigma.level, orders)


# ----------------------------
# Оценка L^r-нормы снизу
# ----------------------------


# fmt: off
@dataclass(frozen=True)
class ProbeReport:
    r                   : float
    lower_bound         : float
    character_bound     : float
    random_bound        : float
    trials              : int
# fmt: on


def op_norm_lr_probe(
    A: OperatorMatrix, r: float, trials: int, rng: np.random.Generator
) -> ProbeReport:
    """max ‖Af‖_r / ‖f‖_r по всем характерам и trials случайным функциям."""
    _check_r(r)
    level = A.level
    images = inverse_columns(level, np.asarray(A.entries))  # столбец ξ = A χ_ξ
    character_bound = max(lr_norm(GridFunction(level, images[:, c]), r) for c in range(level.M))

    random_bound = 0.0
    if trials > 0:
        probes = rng.standard_normal((level.M, trials)) + 1j * rng.standard_normal((level.M, trials))
        outputs = inverse_columns(level, A.entries @ forward_columns(level, probes))
        for t in range(trials):
            denominator = lr_norm(GridFunction(level, probes[:, t]), r)
            if denominator > 0:
                ratio = lr_norm(GridFunction(level, outputs[:, t]), r) / denominator
                random_bound = max(random_bound, ratio)
    return ProbeReport(
        r=r,
        lower_bound=max(character_bound, random_bound),
        character_bound=character_bound,
        random_bound=random_bound,
        trials=trials,
    )
