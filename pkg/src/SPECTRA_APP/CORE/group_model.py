"""group_model.py

Точная арифметика компактных групп на конечном уровне усечения:

- Z_p^d (p-адические целые) и её двойственная группа Прюфера (рациональные a/p^k mod 1);
- компактные группы Виленкина как прямое произведение циклических групp Z/m_j
  с метрикой цепочки аннуляторов.

Все двойственные индексы хранятся точно (Fraction или цифры), спаривание
считается в целых числах, а экспонента вызывается один раз в конце.

Каноническим порядком двойственных индексов на уровне N считается порядок
«норма по возрастанию, затем DFT-индекс по возрастанию». Именно этот порядок
используют все матрицы и сетки ниже по стеку; оболочки ‖ξ‖ = p^j в нём
идут подряд.

Точки уровня нумеруются плоским индексом j ∈ [0, M): для Z_p^d это
row-major индекс по координатам (x_1, …, x_d), x_i ∈ Z/p^N; для групп
Виленкина — смешанная система счисления с младшей цифрой x_0.
"""

from __future__ import annotations

import re
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import prod
from typing import Any, TypeAlias, overload

import numpy as np
from loguru import logger

from GENERAL.errors import (
    GroupMismatch,
    InvalidDescriptor,
    LevelMismatch,
    LevelTooCoarse,
    LevelTooLarge,
)
from SPECTRA_APP.APP.types import GroupKind

MAX_QUOTIENT_SIZE = 2**20

FractionalValue: TypeAlias = Fraction

_PADIC_TEXT = re.compile(r"^p(?P<p>\d+)(?:d(?P<d>\d+))?$")
_QUARTER_TURNS = np.array([1 + 0j, 1j, -1 + 0j, -1j])


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def unit_root(value: Fraction) -> complex:
    """exp(2πi·value); четверти оборота возвращаются точно."""
    if (4 * value.numerator) % value.denominator == 0:
        return complex(_QUARTER_TURNS[(4 * value.numerator // value.denominator) % 4])
    return complex(np.exp(2j * np.pi * float(value)))


def unit_roots(numerators: np.ndarray, denominator: int) -> np.ndarray:
    """Векторная версия :func:`unit_root` для целых фаз numerators/denominator."""
    numerators = np.asarray(numerators, dtype=np.int64)
    out = np.exp(2j * np.pi * (numerators % denominator) / denominator)
    quarter = (4 * numerators) % denominator == 0
    if np.any(quarter):
        turns = (4 * numerators[quarter] // denominator) % 4
        out[quarter] = _QUARTER_TURNS[turns]
    return out


# ----------------------------
# Описание группы и уровень
# ----------------------------


# fmt: off
@dataclass(frozen=True)
class GroupDescriptor:
    """Описание компактной группы.

    Attributes
    ----------
    kind
        padic (Z_p^d) или vilenkin_product (∏ Z/m_j).
    p, d
        Простое p и размерность d (только padic).
    factors
        Порядки m_0, m_1, … циклических множителей (только vilenkin_product).
    """
    kind                : GroupKind
    p                   : int                   = 0
    d                   : int                   = 1
    factors             : tuple[int, ...]       = ()
# fmt: on

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "kind", GroupKind(self.kind))
        except ValueError:
            raise InvalidDescriptor(f"Неизвестный вид группы: {self.kind!r}") from None

        if self.kind is GroupKind.PADIC:
            if not is_prime(self.p):
                raise InvalidDescriptor(f"p={self.p} не является простым числом")
            if self.d < 1:
                raise InvalidDescriptor(f"Размерность d={self.d} должна быть ≥ 1")
            if self.factors:
                raise InvalidDescriptor("factors задаются только для групп Виленкина")
            return

        factors = tuple(int(m) for m in self.factors)
        if not factors:
            raise InvalidDescriptor("Группа Виленкина требует непустой список множителей")
        if any(m < 2 for m in factors):
            raise InvalidDescriptor(f"Все множители должны быть ≥ 2: {factors}")
        if self.d != 1:
            raise InvalidDescriptor("Группы Виленкина поддерживаются только при d=1")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "p", 0)

    @classmethod
    def padic(cls, p: int, d: int = 1) -> GroupDescriptor:
        return cls(kind=GroupKind.PADIC, p=p, d=d)

    @classmethod
    def vilenkin(cls, factors: Sequence[int]) -> GroupDescriptor:
        return cls(kind=GroupKind.VILENKIN_PRODUCT, factors=tuple(factors))

    @classmethod
    def parse(cls, text: str) -> GroupDescriptor:
        """Разбирает краткую запись: ``p2d1``, ``p3``, ``vilenkin:2,3,2``."""
        raw = text.strip().lower()
        if raw.startswith("vilenkin:"):
            try:
                factors = tuple(int(x) for x in raw.split(":", 1)[1].split(","))
            except ValueError:
                raise InvalidDescriptor(f"Некорректные множители: {text!r}") from None
            return cls.vilenkin(factors)

        match = _PADIC_TEXT.match(raw)
        if match is None:
            raise InvalidDescriptor(
                f"Некорректная группа {text!r}; ожидается pPdD или vilenkin:m0,m1,..."
            )
        return cls.padic(int(match["p"]), int(match["d"] or 1))

    @property
    def is_padic(self) -> bool:
        return self.kind is GroupKind.PADIC

    @property
    def sup_factor(self) -> int:
        return self.p if self.is_padic else max(self.factors)

    def factor(self, j: int) -> int:
        """Порядок j-го фактора цепочки подгрупп (p^d для Z_p^d)."""
        return self.p**self.d if self.is_padic else self.factors[j]

    def to_json_dict(self, N: int) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "p": self.p if self.is_padic else None,
            "d": self.d,
            "factors": list(self.factors),
            "N": N,
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> tuple[GroupDescriptor, int]:
        try:
            kind = GroupKind(data["kind"])
            if kind is GroupKind.PADIC:
                descriptor = cls.padic(int(data["p"]), int(data.get("d", 1)))
            else:
                descriptor = cls.vilenkin(tuple(int(m) for m in data["factors"]))
            return descriptor, int(data["N"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidDescriptor(f"Некорректное описание группы: {data!r}") from e

    def __str__(self) -> str:
        if self.is_padic:
            return f"p{self.p}d{self.d}"
        return "vilenkin:" + ",".join(str(m) for m in self.factors)


def _quotient_size(descriptor: GroupDescriptor, N: int, cap: int) -> int:
    if N < 0:
        raise InvalidDescriptor(f"Уровень N={N} должен быть ≥ 0")
    if not descriptor.is_padic and N > len(descriptor.factors):
        raise InvalidDescriptor(
            f"Уровень N={N} превышает длину цепочки множителей {len(descriptor.factors)}"
        )
    M = 1
    for j in range(N):
        M *= descriptor.factor(j)
        if M > cap:
            raise LevelTooLarge(f"M > {cap} для {descriptor} на уровне N={N}")
    return M


@dataclass(frozen=True)
class GroupLevel:
    """Группа, усечённая на уровне N; M — порядок конечного фактора."""

    descriptor: GroupDescriptor
    N: int
    M: int

    def __post_init__(self) -> None:
        expected = _quotient_size(self.descriptor, self.N, MAX_QUOTIENT_SIZE)
        if expected != self.M:
            raise InvalidDescriptor(f"M={self.M} не равно {expected} для уровня {self.N}")

    @property
    def axes(self) -> tuple[int, ...]:
        """Размеры осей row-major решётки (для Виленкина старшая цифра первой)."""
        if self.descriptor.is_padic:
            return (self.descriptor.p**self.N,) * self.descriptor.d
        if self.N == 0:
            return (1,)
        return tuple(reversed(self.descriptor.factors[: self.N]))

    @property
    def phase_denominator(self) -> int:
        return self.descriptor.p**self.N if self.descriptor.is_padic else self.M

    @property
    def shell_count(self) -> int:
        return self.N + 1

    def to_json_dict(self) -> dict[str, Any]:
        return self.descriptor.to_json_dict(self.N)

    def __str__(self) -> str:
        return f"{self.descriptor} N={self.N} (M={self.M})"


def make_level(
    descriptor: GroupDescriptor, N: int, cap: int = MAX_QUOTIENT_SIZE
) -> GroupLevel:
    """Строит уровень усечения с точным вычислением M (M ≤ cap ≤ 2^20)."""
    M = _quotient_size(descriptor, N, min(cap, MAX_QUOTIENT_SIZE))
    logger.debug("Уровень {} N={}: M={}", descriptor, N, M)
    return GroupLevel(descriptor=descriptor, N=N, M=M)


# ----------------------------
# Точки
# ----------------------------


@dataclass(frozen=True)
class PointIndex:
    """Точка уровня: координаты x_i mod p^N (padic) или цифры (x_0, …, x_{N−1})."""

    digits: tuple[int, ...]

    @classmethod
    def from_flat(cls, level: GroupLevel, j: int) -> PointIndex:
        if not 0 <= j < level.M:
            raise LevelMismatch(f"Индекс точки {j} вне [0, {level.M})")
        coords = tuple(int(c) for c in np.unravel_index(j, level.axes))
        if level.descriptor.is_padic:
            return cls(coords)
        return cls(tuple(reversed(coords))[: level.N])

    def axis_coords(self, level: GroupLevel) -> tuple[int, ...]:
        self.check(level)
        if level.descriptor.is_padic:
            return self.digits
        if level.N == 0:
            return (0,)
        padded = self.digits + (0,) * (level.N - len(self.digits))
        return tuple(reversed(padded))

    def flat(self, level: GroupLevel) -> int:
        return int(np.ravel_multi_index(self.axis_coords(level), level.axes))

    def check(self, level: GroupLevel) -> None:
        descriptor = level.descriptor
        if descriptor.is_padic:
            ok = len(self.digits) == descriptor.d and all(
                0 <= x < descriptor.p**level.N for x in self.digits
            )
        else:
            ok = len(self.digits) <= level.N and all(
                0 <= x < descriptor.factors[j] for j, x in enumerate(self.digits)
            )
        if not ok:
            raise LevelMismatch(f"Точка {self.digits} вне уровня {level}")


def point_enumerate(level: GroupLevel) -> tuple[PointIndex, ...]:
    return tuple(PointIndex.from_flat(level, j) for j in range(level.M))


# ----------------------------
# Двойственная группа
# ----------------------------


def _p_exponent(denominator: int, p: int) -> int:
    k = 0
    while denominator % p == 0:
        denominator //= p
        k += 1
    if denominator != 1:
        raise InvalidDescriptor("Знаменатель двойственного индекса не является степенью p")
    return k


@dataclass(frozen=True)
class DualIndex:
    """Элемент двойственной группы.

    Для Z_p^d — кортеж несократимых дробей a/p^k ∈ [0, 1) по координатам,
    для групп Виленкина — цифры (b_0, b_1, …), b_j ∈ Z/m_j (хвостовые нули
    отбрасываются, так что запись канонична).
    """

    group: GroupDescriptor
    rationals: tuple[Fraction, ...] = ()
    digits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.group.is_padic:
            values = self.rationals or (Fraction(0),) * self.group.d
            if len(values) != self.group.d or self.digits:
                raise GroupMismatch(f"Ожидалось {self.group.d} дробей для {self.group}")
            reduced = tuple(Fraction(v) % 1 for v in values)
            for r in reduced:
                _p_exponent(r.denominator, self.group.p)
            object.__setattr__(self, "rationals", reduced)
            return

        if self.rationals:
            raise GroupMismatch(f"Для {self.group} индекс задаётся цифрами")
        digits = [int(b) for b in self.digits]
        if len(digits) > len(self.group.factors):
            raise GroupMismatch(f"Слишком много цифр для {self.group}")
        digits = [b % m for b, m in zip(digits, self.group.factors)]
        while digits and digits[-1] == 0:
            digits.pop()
        object.__setattr__(self, "digits", tuple(digits))

    @classmethod
    def of(cls, group: GroupDescriptor, *values: Fraction | int | str) -> DualIndex:
        """Удобный конструктор: дроби для Z_p^d, цифры для групп Виленкина."""
        if group.is_padic:
            return cls(group=group, rationals=tuple(Fraction(v) for v in values))
        return cls(group=group, digits=tuple(int(v) for v in values))

    @classmethod
    def zero(cls, group: GroupDescriptor) -> DualIndex:
        return cls(group=group)

    @classmethod
    def from_dft(cls, level: GroupLevel, index: int) -> DualIndex:
        """Обратная сторона биекции ξ ↔ DFT-индекс m ∈ [0, M)."""
        if not 0 <= index < level.M:
            raise LevelMismatch(f"DFT-индекс {index} вне [0, {level.M})")
        coords = [int(c) for c in np.unravel_index(index, level.axes)]
        group = level.descriptor
        if group.is_padic:
            denominator = group.p**level.N
            return cls(group=group, rationals=tuple(Fraction(m, denominator) for m in coords))
        return cls(group=group, digits=tuple(reversed(coords))[: level.N])

    @cached_property
    def exponents(self) -> tuple[int, ...]:
        """Показатели k_i знаменателей p^{k_i} (только padic)."""
        return tuple(_p_exponent(r.denominator, self.group.p) for r in self.rationals)

    @cached_property
    def shell(self) -> int:
        """Номер оболочки: 0 для ξ=0, иначе j с ‖ξ‖ = p^j (уровень аннулятора)."""
        if self.group.is_padic:
            return max(self.exponents, default=0)
        return len(self.digits)

    @property
    def required_level(self) -> int:
        return self.shell

    @cached_property
    def norm(self) -> int:
        if self.is_zero:
            return 0
        if self.group.is_padic:
            return self.group.p**self.shell
        return prod(self.group.factors[: len(self.digits)])

    @property
    def bracket(self) -> int:
        return max(1, self.norm)

    @property
    def is_zero(self) -> bool:
        if self.group.is_padic:
            return all(r == 0 for r in self.rationals)
        return not self.digits

    def _check_level(self, level: GroupLevel) -> None:
        if level.descriptor != self.group:
            raise GroupMismatch(f"{self} не принадлежит {level.descriptor}")
        if self.required_level > level.N:
            raise LevelTooCoarse(f"{self} требует уровня ≥ {self.required_level}, дан {level.N}")

    def dft_coords(self, level: GroupLevel) -> tuple[int, ...]:
        self._check_level(level)
        if self.group.is_padic:
            return tuple(
                r.numerator * self.group.p ** (level.N - k)
                for r, k in zip(self.rationals, self.exponents)
            )
        if level.N == 0:
            return (0,)
        padded = self.digits + (0,) * (level.N - len(self.digits))
        return tuple(reversed(padded))

    def dft_index(self, level: GroupLevel) -> int:
        return int(np.ravel_multi_index(self.dft_coords(level), level.axes))

    def __add__(self, other: DualIndex) -> DualIndex:
        return prufer_add(self, other)

    def __neg__(self) -> DualIndex:
        if self.group.is_padic:
            return DualIndex(self.group, rationals=tuple(-r for r in self.rationals))
        return DualIndex(
            self.group, digits=tuple(-b for b in self.digits)
        )

    def __str__(self) -> str:
        if not self.group.is_padic:
            return "[" + ",".join(str(b) for b in self.digits) + "]"
        parts = [str(r) for r in self.rationals]
        return parts[0] if len(parts) == 1 else "(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class DualEnumeration(Sequence[DualIndex]):
    """Двойственные индексы уровня в каноническом порядке и их DFT-индексы."""

    indices: tuple[DualIndex, ...]
    dft_indices: tuple[int, ...]

    @overload
    def __getitem__(self, i: int) -> DualIndex: ...
    @overload
    def __getitem__(self, i: slice) -> Sequence[DualIndex]: ...

    def __getitem__(self, i: int | slice) -> DualIndex | Sequence[DualIndex]:
        return self.indices[i]

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[DualIndex]:
        return iter(self.indices)


def dual_enumerate(level: GroupLevel) -> DualEnumeration:
    structure = level_structure(level)
    dft = tuple(int(m) for m in structure.dft)
    return DualEnumeration(
        indices=tuple(DualIndex.from_dft(level, m) for m in dft),
        dft_indices=dft,
    )


def prufer_add(xi: DualIndex, eta: DualIndex) -> DualIndex:
    """Сложение в двойственной группе (покоординатно mod 1 или по цифрам)."""
    if xi.group != eta.group:
        raise GroupMismatch(f"{xi} и {eta} принадлежат разным группам")
    group = xi.group
    if group.is_padic:
        return DualIndex(group, rationals=tuple(a + b for a, b in zip(xi.rationals, eta.rationals)))
    length = max(len(xi.digits), len(eta.digits))
    a = xi.digits + (0,) * (length - len(xi.digits))
    b = eta.digits + (0,) * (length - len(eta.digits))
    return DualIndex(group, digits=tuple(x + y for x, y in zip(a, b)))


def pairing(xi: DualIndex, x: PointIndex, level: GroupLevel) -> FractionalValue:
    """Точное значение {ξ·x} ∈ [0, 1)."""
    xi._check_level(level)
    x.check(level)
    total = Fraction(0)
    if xi.group.is_padic:
        for r, coord in zip(xi.rationals, x.digits):
            total += Fraction((r.numerator * coord) % r.denominator, r.denominator)
    else:
        for b, coord, m in zip(xi.digits, x.digits, xi.group.factors):
            total += Fraction(b * coord, m)
    return total % 1


def character(xi: DualIndex, x: PointIndex, level: GroupLevel) -> complex:
    return unit_root(pairing(xi, x, level))


# ----------------------------
# Векторные структуры уровня (кэш)
# ----------------------------


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class LevelStructure:
    """Массивы уровня, общие для всех вычислений (только чтение).

    dft[c] — DFT-индекс канонической позиции c, position — обратная перестановка.
    norms/brackets/shells — по каноническому порядку; point_* — по плоскому
    индексу точки.
    """

    level: GroupLevel
    dft: np.ndarray
    position: np.ndarray
    norms: np.ndarray
    brackets: np.ndarray
    shells: np.ndarray
    dual_coords: np.ndarray
    point_coords: np.ndarray
    point_norms: np.ndarray
    point_floor: np.ndarray
    negation: np.ndarray

    @property
    def axis_sizes(self) -> np.ndarray:
        return np.asarray(self.level.axes, dtype=np.int64)

    @property
    def axis_weights(self) -> np.ndarray:
        return self.level.phase_denominator // self.axis_sizes

    def ravel(self, coords: np.ndarray) -> np.ndarray:
        """Плоский индекс по координатам осей (последняя ось coords)."""
        flat = np.zeros(coords.shape[:-1], dtype=np.int64)
        for a, size in enumerate(self.level.axes):
            flat = flat * size + coords[..., a] % size
        return flat


def _axis_valuation(values: np.ndarray, p: int, N: int) -> np.ndarray:
    valuation = np.zeros_like(values)
    rest = values.copy()
    for _ in range(N):
        divisible = (rest != 0) & (rest % p == 0)
        valuation += divisible
        rest = np.where(divisible, rest // p, rest)
    return valuation


@lru_cache(maxsize=64)
def level_structure(level: GroupLevel) -> LevelStructure:
    axes = level.axes
    M = level.M
    coords = np.stack(np.unravel_index(np.arange(M), axes), axis=1).astype(np.int64)
    descriptor = level.descriptor

    if descriptor.is_padic:
        p, N = descriptor.p, level.N
        valuation = _axis_valuation(coords, p, N)
        axis_shell = np.where(coords == 0, 0, N - valuation)
        shells_flat = axis_shell.max(axis=1)
        norms_flat = np.where((coords != 0).any(axis=1), p**shells_flat, 0)

        point_valuation = np.where(coords == 0, N, valuation)
        point_order = point_valuation.min(axis=1)
        point_norms = np.power(float(p), -point_order.astype(float))
        point_floor = (coords == 0).all(axis=1)
    else:
        N = level.N
        digits = coords[:, ::-1]  # столбец j: цифра j
        partial = np.cumprod((1,) + descriptor.factors[:N])
        shells_flat = np.zeros(M, dtype=np.int64)
        first_nonzero = np.full(M, N, dtype=np.int64)
        for j in range(N):
            shells_flat = np.where(digits[:, j] != 0, j + 1, shells_flat)
            first_nonzero = np.where(
                (digits[:, j] != 0) & (first_nonzero == N), j, first_nonzero
            )
        norms_flat = np.where(shells_flat == 0, 0, partial[shells_flat])
        point_norms = 1.0 / partial[first_nonzero]
        point_floor = first_nonzero == N
        if N == 0:
            point_norms = np.ones(M)
            point_floor = np.ones(M, dtype=bool)

    dft = np.lexsort((np.arange(M), norms_flat))
    position = np.empty(M, dtype=np.int64)
    position[dft] = np.arange(M)

    structure = LevelStructure(
        level=level,
        dft=_readonly(dft),
        position=_readonly(position),
        norms=_readonly(norms_flat[dft].astype(np.float64)),
        brackets=_readonly(np.maximum(1, norms_flat[dft]).astype(np.float64)),
        shells=_readonly(shells_flat[dft]),
        dual_coords=_readonly(coords[dft]),
        point_coords=_readonly(coords),
        point_norms=_readonly(point_norms),
        point_floor=_readonly(point_floor),
        negation=np.empty(0),
    )
    negated = structure.ravel(-coords[dft])
    object.__setattr__(structure, "negation", _readonly(position[negated]))
    return structure


def shift_positions(level: GroupLevel, eta: DualIndex) -> np.ndarray:
    """Канонические позиции ξ+η для каждой канонической позиции ξ."""
    structure = level_structure(level)
    shift = np.asarray(eta.dft_coords(level), dtype=np.int64)
    return structure.position[structure.ravel(structure.dual_coords + shift)]


def canonical_position(level: GroupLevel, xi: DualIndex) -> int:
    return int(level_structure(level).position[xi.dft_index(level)])


@lru_cache(maxsize=4)
def addition_table(level: GroupLevel) -> np.ndarray:
    """Таблица T[ζ, ξ] = каноническая позиция ζ+ξ (M×M)."""
    structure = level_structure(level)
    c = structure.dual_coords
    flat = np.zeros((level.M, level.M), dtype=np.int64)
    for a, size in enumerate(level.axes):
        flat = flat * size + (c[:, None, a] + c[None, :, a]) % size
    return _readonly(structure.position[flat])


def character_block(level: GroupLevel, rows: np.ndarray) -> np.ndarray:
    """Строки таблицы характеров: [c, j] = χ_{ξ_c}(x_j) для канонических позиций rows."""
    structure = level_structure(level)
    weighted = structure.dual_coords[rows] * structure.axis_weights
    phase = (weighted @ structure.point_coords.T) % level.phase_denominator
    return unit_roots(phase, level.phase_denominator)


def character_column(level: GroupLevel, xi: DualIndex) -> np.ndarray:
    """Значения χ_ξ во всех точках уровня (плоский порядок точек)."""
    structure = level_structure(level)
    weighted = np.asarray(xi.dft_coords(level), dtype=np.int64) * structure.axis_weights
    phase = (structure.point_coords @ weighted) % level.phase_denominator
    return unit_roots(phase, level.phase_denominator)


def point_digit(level: GroupLevel, j: int) -> np.ndarray:
    """j-я цифра точки (для Z_p^d — цифра первой координаты)."""
    structure = level_structure(level)
    if j < 0:
        raise LevelMismatch(f"Номер цифры {j} должен быть ≥ 0")
    if j >= level.N:
        return np.zeros(level.M, dtype=np.int64)
    if level.descriptor.is_padic:
        p = level.descriptor.p
        return (structure.point_coords[:, 0] // p**j) % p
    return structure.point_coords[:, level.N - 1 - j]
