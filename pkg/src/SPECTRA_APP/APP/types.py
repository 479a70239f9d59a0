from enum import Enum, StrEnum, auto


class GroupKind(StrEnum):
    """Вид компактной группы."""
    PADIC = "padic"
    VILENKIN_PRODUCT = "vilenkin_product"


class Scale(StrEnum):
    """Шкала мультипликатора: ⟨ξ⟩^s (bracket) или ‖ξ‖^s (vladimirov)."""
    BRACKET = "bracket"
    VLADIMIROV = "vladimirov"


class Subcommand(StrEnum):
    ASSEMBLE = "assemble"
    APPLY = "apply"
    SPECTRUM = "spectrum"
    SVD = "svd"
    SCHATTEN = "schatten"
    DIXMIER = "dixmier"
    LORENTZ = "lorentz"
    NUCLEAR = "nuclear"
    HS_IDENTITY = "hs-identity"
    GOHBERG = "gohberg"
    SANDWICH = "sandwich"
    FREDHOLM = "fredholm"
    WEYL = "weyl"
    SECTORIAL = "sectorial"
    ELLIPTIC = "elliptic"
    HOERMANDER = "hoermander"
    COMPOSE_RESIDUAL = "compose-residual"
    ADJOINT_RESIDUAL = "adjoint-residual"
    TRANSPOSE_RESIDUAL = "transpose-residual"
    INVERSE_RESIDUAL = "inverse-residual"
    OPNORM = "opnorm"
    TRANSFORM_BENCH = "transform-bench"
    VERIFY = "verify"


class Verdict(StrEnum):
    """Итог эмпирической проверки (по уровням или по оболочкам)."""
    STABLE = "stable"
    UNSTABLE = "unstable"
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"
    DECAYING = "decaying"
    NON_DECAYING = "non_decaying"
    SECTORIAL = "sectorial"
    NOT_SECTORIAL = "not sectorial"
    RESOLVENT = "resolvent"
    FREDHOLM_SPECTRUM = "fredholm_spectrum"
    HOLDS = "holds"
    FAILS = "fails"
    REPORTED = "reported"


class StatusReport(Enum):
    """Уровень важности сообщения в отчёте."""
    INFO = auto()
    IMPORTANT_INFO = auto()
    WARNING = auto()
    ERROR = auto()
    FATAL = auto()
