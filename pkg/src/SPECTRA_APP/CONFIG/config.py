"""
Конфигурация запуска SPECTRA_APP.

Содержит:
- ToleranceConfig — допуски численных проверок;
- SpectraConfig — плоская модель ключей запуска (зеркало флагов командной строки),
  проверяется целиком до начала вычислений; неизвестные ключи отклоняются.
"""

import math
from pathlib import Path
from typing import Any, Self

from pydantic import (
    BaseModel,
    Field,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    field_validator,
    model_validator,
)
from pydantic_settings import SettingsConfigDict

from GENERAL.config import CommonConfig
from GENERAL.errors import EvalError
from SPECTRA_APP.APP.types import Scale
from SPECTRA_APP.CORE.group_model import MAX_QUOTIENT_SIZE, GroupDescriptor
from SPECTRA_APP.CORE.symbols import parse_builtin
from SPECTRA_APP.INFRA.utils import parse_level_range


class ToleranceConfig(BaseModel):
    """Допуски проверок (переопределяются в разделе tolerances)."""

    model_config = SettingsConfigDict(extra="forbid")

    # fmt: off
    identity                        : NonNegativeFloat              = 1e-12
    relative                        : NonNegativeFloat              = 1e-10
    hausdorff                       : NonNegativeFloat              = 1e-6
    sector                          : NonNegativeFloat              = 1e-12
    stability                       : PositiveFloat                 = 0.1
    zero                            : NonNegativeFloat              = 0.0
    # fmt: on


def parse_complex(value: Any) -> complex:
    """``"2"``, ``"0.5-1j"``, ``"1+2i"`` или число → complex."""
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        return complex(value)
    text = str(value).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(text)
    except ValueError:
        raise ValueError(f"Некорректное комплексное число {value!r}") from None


def builtin_order(builtin: str | None) -> float:
    """Порядок n для закона Вейля по умолчанию: s из vladimirov/bessel при s > 0, иначе 1."""
    if builtin is None:
        return 1.0
    try:
        parsed = parse_builtin(builtin)
        s = float(parsed.param("s")) if parsed.name in ("vladimirov", "bessel") else 1.0
    except (EvalError, ValueError):
        return 1.0
    return s if math.isfinite(s) and s > 0 else 1.0


class SpectraConfig(CommonConfig):
    """Параметры запуска: группа, уровни, символ(ы) и параметры операций."""

    # fmt: off
    # Группа и уровни
    group                           : str                           = "p2d1"
    level                           : NonNegativeInt | None         = None
    levels                          : str | None                    = None

    # Символ: ровно один из symbol / builtin / csv
    symbol                          : str | None                    = None
    builtin                         : str | None                    = None
    csv                             : Path | None                   = None
    symbol2                         : str | None                    = None
    builtin2                        : str | None                    = None
    csv2                            : Path | None                   = None

    # Функция для apply: файл JSON или выражение от x
    function                        : Path | None                   = None
    function_expr                   : str | None                    = None

    # Параметры операций
    trials                          : PositiveInt                   = 100
    seed                            : NonNegativeInt                = 0
    gamma                           : PositiveFloat                 = 2.0
    r                               : PositiveFloat                 = 2.0
    w                               : PositiveFloat                 = 2.0
    r2                              : PositiveFloat                 = 2.0
    s_from                          : float                         = 0.0
    s_to                            : float                         = 0.0
    lam                             : str | float | None            = None
    shell_min                       : NonNegativeInt                = 1
    cutoffs                         : list[NonNegativeInt] | None   = None
    m                               : float                         = 0.0
    rho                             : float                         = 1.0
    delta                           : float                         = 0.0
    alpha_max                       : NonNegativeInt                = 1
    beta_max                        : NonNegativeInt                = 0
    scale                           : Scale                         = Scale.VLADIMIROV
    order                           : PositiveFloat | None          = None
    alpha                           : NonNegativeFloat              = 0.0
    sobolev_orders                  : list[float]                   = Field(default_factory=lambda: [0.0, 1.0, 2.0])
    repeats                         : PositiveInt                   = 3

    # Ограничения и допуски
    matrix_cap                      : PositiveInt                   = 1024
    tolerances                      : ToleranceConfig               = Field(default_factory=ToleranceConfig)
    # fmt: on

    @field_validator("lam")
    @classmethod
    def _check_lam(cls, value: str | float | None) -> str | float | None:
        if value is not None:
            parse_complex(value)
        return value

    @field_validator("matrix_cap")
    @classmethod
    def _check_cap(cls, value: int) -> int:
        if value > MAX_QUOTIENT_SIZE:
            raise ValueError(f"matrix_cap={value} больше {MAX_QUOTIENT_SIZE}")
        return value

    @model_validator(mode="after")
    def _check_sources(self) -> Self:
        if self.level is not None and self.levels is not None:
            raise ValueError("Задайте либо level, либо levels")
        for suffix in ("", "2"):
            given = [
                key + suffix
                for key in ("symbol", "builtin", "csv")
                if getattr(self, key + suffix) is not None
            ]
            if len(given) > 1:
                raise ValueError(f"Источник символа задаётся одним ключом, получено: {', '.join(given)}")
        if self.function is not None and self.function_expr is not None:
            raise ValueError("Задайте либо function, либо function_expr")
        if self.levels is not None:
            parse_level_range(self.levels)
        GroupDescriptor.parse(self.group)
        if self.order is None:
            self.order = builtin_order(self.builtin)
        return self

    @property
    def descriptor(self) -> GroupDescriptor:
        return GroupDescriptor.parse(self.group)

    @property
    def level_numbers(self) -> tuple[int, ...]:
        if self.levels is not None:
            return parse_level_range(self.levels)
        if self.level is not None:
            return (self.level,)
        return ()

    @property
    def weyl_order(self) -> float:
        return self.order if self.order is not None else builtin_order(self.builtin)

    @property
    def lam_value(self) -> complex | None:
        return None if self.lam is None else parse_complex(self.lam)

    def echo(self) -> dict[str, Any]:
        """Эхо конфигурации для manifest (без каталога вывода и логирования)."""
        return self.model_dump(mode="json", exclude={"out_dir", "logging"})
