"""symbols.py

Символы σ(x, ξ) на уровне N: встроенные семейства, вычисление выражений
на сетке (точки × двойственные индексы), разностный оператор Δ_η,
производная D^β_x по переменной x и оценка констант классов Хёрмандера.

Сетка хранится плотной матрицей M×M: строки — точки (плоский порядок),
столбцы — двойственные индексы (канонический порядок).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from loguru import logger

from GENERAL.errors import BadExponent, EvalError, GroupMismatch, LevelMismatch
from SPECTRA_APP.APP.types import Scale, Verdict
from SPECTRA_APP.CORE.group_model import (
    DualIndex,
    GroupLevel,
    character_column,
    level_structure,
    point_digit,
    shift_positions,
)
from SPECTRA_APP.CORE.symbol_parser import (
    Binary,
    Call,
    Character,
    Compare,
    Digit,
    Node,
    Number,
    SymbolExpr,
    Unary,
    Variable,
    parse_symbol,
)
from SPECTRA_APP.CORE.transform import forward_columns, inverse_columns, sobolev_weights

STABILITY_TOLERANCE = 0.1


@dataclass(frozen=True, eq=False)
class SymbolGrid:
    """σ(x, ξ) на сетке уровня; truncation_floor — использован пол |0| = p^{−N}."""

    level: GroupLevel
    values: np.ndarray
    provenance: str
    truncation_floor: bool = False

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != (self.level.M, self.level.M):
            raise LevelMismatch(
                f"Сетка {values.shape} не соответствует уровню с M={self.level.M}"
            )
        if not np.all(np.isfinite(values)):
            raise EvalError(f"Символ {self.provenance!r} содержит неконечные значения")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray, provenance: str) -> SymbolGrid:
        return SymbolGrid(self.level, values, provenance, self.truncation_floor)

    @classmethod
    def from_multiplier(cls, level: GroupLevel, m: np.ndarray, provenance: str) -> SymbolGrid:
        return cls(level, np.broadcast_to(np.asarray(m), (level.M, level.M)), provenance)

    @classmethod
    def from_function(cls, level: GroupLevel, g: np.ndarray, provenance: str) -> SymbolGrid:
        return cls(level, np.broadcast_to(np.asarray(g)[:, None], (level.M, level.M)), provenance)


# ----------------------------
# Вычисление выражений
# ----------------------------


@dataclass
class _Evaluator:
    """Вычисляет AST на сетке с маской «активных» узлов для охраны if-ветвей."""

    level: GroupLevel
    uses_floor: bool = field(default=False)

    def __post_init__(self) -> None:
        structure = level_structure(self.level)
        self.shape = (self.level.M, self.level.M)
        self.env = {
            "norm_x": structure.point_norms.astype(np.complex128)[:, None],
            "norm_xi": structure.norms.astype(np.complex128)[None, :],
            "bracket_xi": structure.brackets.astype(np.complex128)[None, :],
        }
        self.floor = structure.point_floor

    def guard(self, bad: np.ndarray, mask: np.ndarray, node: Node, message: str) -> None:
        if np.any(np.broadcast_to(bad, self.shape) & mask):
            line, col = node.pos
            raise EvalError(message, line, col)

    def eval(self, node: Node, mask: np.ndarray) -> np.ndarray:
        match node:
            case Number(value=value):
                return np.asarray(complex(value))
            case Variable(name=name):
                if name == "norm_x" and np.any(self.floor):
                    self.uses_floor = True
                return self.env[name]
            case Digit(index=index):
                return point_digit(self.level, index).astype(np.complex128)[:, None]
            case Character():
                return self.character(node)
            case Unary(operand=operand):
                return -self.eval(operand, mask)
            case Binary():
                return self.binary(node, mask)
            case Compare(op=op, left=left, right=right):
                a = self.eval(left, mask).real
                b = self.eval(right, mask).real
                result = {
                    "<": a < b, "<=": a <= b, ">": a > b,
                    ">=": a >= b, "==": a == b, "!=": a != b,
                }[op]
                return np.asarray(result, dtype=np.complex128)
            case Call():
                return self.call(node, mask)
        raise EvalError(f"Неизвестный узел {node!r}")

    def character(self, node: Character) -> np.ndarray:
        group = self.level.descriptor
        if group.is_padic:
            if len(node.frequency) != group.d:
                line, col = node.pos
                raise EvalError(f"Ожидалось {group.d} частот(ы) для {group}", line, col)
            xi = DualIndex(group, rationals=node.frequency)
        else:
            if len(node.frequency) != 1 or node.frequency[0].denominator != 1:
                line, col = node.pos
                raise EvalError("Для групп Виленкина частота — целый DFT-индекс", line, col)
            xi = DualIndex.from_dft(self.level, int(node.frequency[0]) % self.level.M)
        try:
            column = character_column(self.level, xi)
        except Exception as e:
            line, col = node.pos
            raise EvalError(str(e), line, col) from e
        part = column.real if node.real else column.imag
        return part.astype(np.complex128)[:, None]

    def binary(self, node: Binary, mask: np.ndarray) -> np.ndarray:
        a = self.eval(node.left, mask)
        b = self.eval(node.right, mask)
        match node.op:
            case "+":
                return a + b
            case "-":
                return a - b
            case "*":
                return a * b
            case "/":
                zero = b == 0
                self.guard(zero, mask, node, "деление на ноль")
                return a / np.where(zero, 1, b)
            case "^":
                zero_base = (a == 0) & (b.real < 0)
                self.guard(zero_base, mask, node, "ноль в отрицательной степени")
                base = np.where(zero_base, 1, a)
                # вещественный путь: положительное основание или целый показатель
                real_path = (
                    (b.imag == 0)
                    & (base.imag == 0)
                    & ((base.real > 0) | (b.real == np.round(b.real)))
                )
                with np.errstate(all="ignore"):
                    real_power = np.power(
                        np.where(real_path, base.real, 1.0), np.where(real_path, b.real, 0.0)
                    )
                    complex_power = np.power(base, b)
                out = np.where(real_path, real_power, complex_power)
                return np.where(zero_base, 0, out).astype(np.complex128)
        raise EvalError(f"Неизвестная операция {node.op}")

    def call(self, node: Call, mask: np.ndarray) -> np.ndarray:
        if node.name == "if":
            condition = np.broadcast_to(self.eval(node.args[0], mask).real != 0, self.shape)
            yes = self.eval(node.args[1], mask & condition)
            no = self.eval(node.args[2], mask & ~condition)
            return np.where(condition, yes, no)

        args = [self.eval(a, mask) for a in node.args]
        match node.name:
            case "exp":
                return np.exp(args[0])
            case "log":
                zero = args[0] == 0
                self.guard(zero, mask, node, "логарифм нуля")
                return np.log(np.where(zero, 1, args[0]))
            case "sin":
                return np.sin(args[0])
            case "cos":
                return np.cos(args[0])
            case "abs":
                return np.abs(args[0]).astype(np.complex128)
            case "min" | "max":
                pick = np.minimum if node.name == "min" else np.maximum
                result = args[0].real
                for a in args[1:]:
                    result = pick(result, a.real)
                return np.asarray(result, dtype=np.complex128)
        raise EvalError(f"Неизвестная функция {node.name}")


def evaluate(expr: SymbolExpr, level: GroupLevel) -> SymbolGrid:
    evaluator = _Evaluator(level)
    full = np.ones((level.M, level.M), dtype=bool)
    with np.errstate(all="ignore"):
        values = np.broadcast_to(evaluator.eval(expr.root, full), (level.M, level.M))
    if not np.all(np.isfinite(values)):
        line, col = getattr(expr.root, "pos", (0, 0))
        raise EvalError("выражение дало неконечные значения", line, col)
    if evaluator.uses_floor:
        logger.debug("Символ {!r} использует пол |0|_p = p^-N", expr.source)
    return SymbolGrid(level, values, expr.source or str(expr), evaluator.uses_floor)


# ----------------------------
# Встроенные символы
# ----------------------------


@dataclass(frozen=True)
class BuiltinSymbol:
    """Встроенный символ: vladimirov(s), bessel(s), mult(g), radial(values)."""

    name: str
    params: tuple[tuple[str, str], ...] = ()

    def param(self, key: str) -> str:
        for k, v in self.params:
            if k == key:
                return v
        raise EvalError(f"У встроенного символа {self.name} нет параметра {key!r}")

    def __str__(self) -> str:
        return self.name + "".join(f":{k}={v}" for k, v in self.params)


BUILTINS = ("vladimirov", "bessel", "mult", "radial")


def parse_builtin(text: str) -> BuiltinSymbol:
    """Разбирает ``vladimirov:s=1``, ``bessel:s=-1``, ``mult:g=<expr>``, ``radial:values=1,0.5``."""
    name, _, rest = text.strip().partition(":")
    name = name.strip().lower()
    if name not in BUILTINS:
        raise EvalError(f"Неизвестный встроенный символ {name!r}; доступно: {', '.join(BUILTINS)}")
    if not rest:
        raise EvalError(f"Встроенный символ {name} требует параметров")
    key, sep, value = rest.partition("=")
    expected = {"vladimirov": "s", "bessel": "s", "mult": "g", "radial": "values"}[name]
    if not sep or key.strip() != expected:
        raise EvalError(f"Ожидался параметр {expected}=... для {name}")
    return BuiltinSymbol(name, ((expected, value.strip()),))


def _float_param(builtin: BuiltinSymbol, key: str) -> float:
    try:
        return float(builtin.param(key))
    except ValueError:
        raise EvalError(f"{builtin}: параметр {key} не число") from None


def _builtin_grid(builtin: BuiltinSymbol, level: GroupLevel) -> SymbolGrid:
    structure = level_structure(level)
    provenance = str(builtin)
    match builtin.name:
        case "vladimirov":
            weights = sobolev_weights(level, _float_param(builtin, "s"), Scale.VLADIMIROV)
            return SymbolGrid.from_multiplier(level, weights, provenance)
        case "bessel":
            weights = sobolev_weights(level, _float_param(builtin, "s"), Scale.BRACKET)
            return SymbolGrid.from_multiplier(level, weights, provenance)
        case "mult":
            expr = parse_symbol(builtin.param("g"))
            if expr.uses_xi():
                raise EvalError("mult: выражение g может зависеть только от x")
            grid = evaluate(expr, level)
            return SymbolGrid(level, grid.values, provenance, grid.truncation_floor)
        case "radial":
            try:
                table = [complex(v) for v in builtin.param("values").split(",")]
            except ValueError:
                raise EvalError(f"{builtin}: значения должны быть числами") from None
            # недостающие оболочки повторяют последнее значение
            table += [table[-1]] * max(0, level.shell_count - len(table))
            return SymbolGrid.from_multiplier(level, np.asarray(table)[structure.shells], provenance)
    raise EvalError(f"Неизвестный встроенный символ {builtin.name}")


SymbolLike = SymbolExpr | BuiltinSymbol


def eval_grid(sym: SymbolLike, level: GroupLevel) -> SymbolGrid:
    """Плотная выборка символа в канонических порядках."""
    if isinstance(sym, BuiltinSymbol):
        return _builtin_grid(sym, level)
    return evaluate(sym, level)


# ----------------------------
# Разности и производные
# ----------------------------


def _check_group(sigma: SymbolGrid, eta: DualIndex) -> None:
    if eta.group != sigma.level.descriptor:
        raise GroupMismatch(f"{eta} не принадлежит {sigma.level.descriptor}")


def shift_symbol(sigma: SymbolGrid, eta: DualIndex) -> SymbolGrid:
    """(τ_η σ)(x, ξ) = σ(x, ξ + η)."""
    _check_group(sigma, eta)
    perm = shift_positions(sigma.level, eta)
    return sigma.with_values(sigma.values[:, perm], f"shift[{eta}]({sigma.provenance})")


def difference(sigma: SymbolGrid, eta: DualIndex) -> SymbolGrid:
    """Δ_η σ(x, ξ) = σ(x, ξ + η) − σ(x, ξ)."""
    _check_group(sigma, eta)
    perm = shift_positions(sigma.level, eta)
    return sigma.with_values(
        sigma.values[:, perm] - sigma.values, f"Δ[{eta}]({sigma.provenance})"
    )


def x_derivative(sigma: SymbolGrid, beta: float, scale: Scale = Scale.VLADIMIROV) -> SymbolGrid:
    """D^β_x: мультипликатор по переменной x для каждого столбца ξ."""
    if beta < 0:
        raise BadExponent(f"β={beta} должно быть ≥ 0")
    if beta == 0:
        return sigma
    level = sigma.level
    spectra = forward_columns(level, sigma.values) * sobolev_weights(level, beta, scale)[:, None]
    return sigma.with_values(
        inverse_columns(level, spectra), f"D^{beta}_x[{scale}]({sigma.provenance})"
    )


# ----------------------------
# Классы Хёрмандера
# ----------------------------


@dataclass(frozen=True)
class HoermanderLevel:
    N: int
    constants: dict[tuple[int, int], float]


# fmt: off
@dataclass(frozen=True)
class HoermanderReport:
    m                   : float
    rho                 : float
    delta               : float
    scale               : Scale
    per_level           : tuple[HoermanderLevel, ...]
    constants           : dict[tuple[int, int], float]
    verdicts            : dict[tuple[int, int], Verdict]
    verdict             : Verdict
    truncation_floor    : bool
# fmt: on


def level_stability(history: Sequence[float], tolerance: float = STABILITY_TOLERANCE) -> bool:
    """Последовательность не возрастает или меняется < tolerance на двух последних уровнях."""
    values = [float(v) for v in history]
    if len(values) < 2:
        return True
    if all(b <= a * (1 + 1e-12) + 1e-300 for a, b in zip(values, values[1:])):
        return True
    last, previous = values[-1], values[-2]
    scale = max(abs(last), abs(previous))
    if scale == 0:
        return True
    return abs(last - previous) < tolerance * scale


def hoermander_constants(
    sigma: SymbolGrid,
    m: float,
    rho: float,
    delta: float,
    alpha_max: int,
    beta_max: int,
    scale: Scale = Scale.VLADIMIROV,
) -> dict[tuple[int, int], float]:
    """Константы C_{αβ} на одном уровне (α = 0 — без разности, α ≥ 1 — одна Δ_η)."""
    level = sigma.level
    structure = level_structure(level)
    brackets = structure.brackets
    norms = structure.norms
    constants: dict[tuple[int, int], float] = {}

    for beta in range(beta_max + 1):
        derived = x_derivative(sigma, beta, scale).values if beta else sigma.values
        moduli = np.abs(derived).max(axis=0)
        constants[(0, beta)] = float(np.max(moduli / brackets ** (m + delta * beta)))

        if alpha_max < 1:
            continue
        # colmax[e, ξ] = max_x |Δ_{η_e} D^β σ(x, ξ)|
        colmax = np.zeros((level.M, level.M))
        for e in range(1, level.M):
            eta = DualIndex.from_dft(level, int(structure.dft[e]))
            perm = shift_positions(level, eta)
            colmax[e] = np.abs(derived[:, perm] - derived).max(axis=0)
        admissible = (norms[:, None] <= brackets[None, :]) & (norms[:, None] > 0)
        for alpha in range(1, alpha_max + 1):
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = colmax / (
                    np.where(norms > 0, norms, 1.0)[:, None] ** alpha
                    * brackets[None, :] ** (m - rho * alpha + delta * beta)
                )
            constants[(alpha, beta)] = float(np.max(np.where(admissible, ratio, 0.0)))
    return constants


def hoermander_estimate(
    grids: Sequence[SymbolGrid],
    m: float,
    rho: float,
    delta: float,
    alpha_max: int,
    beta_max: int,
    scale: Scale = Scale.VLADIMIROV,
    tolerance: float = STABILITY_TOLERANCE,
) -> HoermanderReport:
    """Оценка констант класса S^m_{ρ,δ} по нескольким уровням с вердиктом устойчивости."""
    if not 0 <= delta <= rho <= 1:
        raise BadExponent(f"Требуется 0 ≤ δ ≤ ρ ≤ 1, получено δ={delta}, ρ={rho}")
    if alpha_max < 0 or beta_max < 0:
        raise BadExponent("α_max и β_max должны быть ≥ 0")
    if not grids:
        raise LevelMismatch("Нет уровней для оценки")

    per_level = tuple(
        HoermanderLevel(g.level.N, hoermander_constants(g, m, rho, delta, alpha_max, beta_max, scale))
        for g in sorted(grids, key=lambda g: g.level.N)
    )
    keys = list(per_level[0].constants)
    constants = {k: max(level.constants[k] for level in per_level) for k in keys}
    verdicts = {
        k: Verdict.STABLE
        if level_stability([level.constants[k] for level in per_level], tolerance)
        else Verdict.UNSTABLE
        for k in keys
    }
    overall = Verdict.STABLE if all(v is Verdict.STABLE for v in verdicts.values()) else Verdict.UNSTABLE
    if overall is Verdict.UNSTABLE:
        logger.warning("Константы Хёрмандера неустойчивы по уровням (m={})", m)
    return HoermanderReport(
        m=m,
        rho=rho,
        delta=delta,
        scale=scale,
        per_level=per_level,
        constants=constants,
        verdicts=verdicts,
        verdict=overall,
        truncation_floor=any(g.truncation_floor for g in grids),
    )


def symbol_source(text: str | None = None, builtin: str | None = None) -> SymbolLike:
    """Выражение или встроенный символ из текстовых параметров запуска."""
    if (text is None) == (builtin is None):
        raise EvalError("Нужно ровно одно: выражение или встроенный символ")
    return parse_symbol(text) if text is not None else parse_builtin(builtin or "")
