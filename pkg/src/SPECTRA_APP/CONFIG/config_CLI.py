"""Разбор командной строки: ``spectra <подкоманда> [флаги]``.

Флаги зеркалируют ключи SpectraConfig. Значение по умолчанию у каждого флага —
None: в конфигурацию попадают только явно заданные флаги, и они перекрывают
ключи файла ``--config``.
"""

import argparse
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn

from GENERAL.errors import ConfigError
from SPECTRA_APP.APP.types import Scale, Subcommand

_HELP = {
    Subcommand.ASSEMBLE: "Собрать матрицу оператора T_σ",
    Subcommand.APPLY: "Применить T_σ к функции",
    Subcommand.SPECTRUM: "Собственные значения T_σ",
    Subcommand.SVD: "Сингулярные числа T_σ",
    Subcommand.SCHATTEN: "Норма Шаттена и функционал символа",
    Subcommand.DIXMIER: "Функционал Диксмье",
    Subcommand.LORENTZ: "Норма Лоренца",
    Subcommand.NUCLEAR: "Сертификат γ-ядерности",
    Subcommand.HS_IDENTITY: "Тождество Гильберта–Шмидта",
    Subcommand.GOHBERG: "Таблица d_σ и проверка оценки Гохберга",
    Subcommand.SANDWICH: "Сравнение s-чисел с нормами столбцов",
    Subcommand.FREDHOLM: "Облака A_n и фредгольмов спектр",
    Subcommand.WEYL: "Считающая функция N(t)",
    Subcommand.SECTORIAL: "Проверка секториальности",
    Subcommand.ELLIPTIC: "Нижняя оценка эллиптичности",
    Subcommand.HOERMANDER: "Константы класса Хёрмандера",
    Subcommand.COMPOSE_RESIDUAL: "Остаток композиции",
    Subcommand.ADJOINT_RESIDUAL: "Остаток сопряжения",
    Subcommand.TRANSPOSE_RESIDUAL: "Остаток транспонирования",
    Subcommand.INVERSE_RESIDUAL: "Остаток обращения",
    Subcommand.OPNORM: "Нормы оператора (Соболев и L^r)",
    Subcommand.TRANSFORM_BENCH: "Замер быстрого и прямого преобразования",
    Subcommand.VERIFY: "Проверка контрольных сумм пакета отчётов",
}


def int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Ожидался список целых через запятую: {text!r}") from None


def float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Ожидался список чисел через запятую: {text!r}") from None


class _Parser(argparse.ArgumentParser):
    """argparse без sys.exit на ошибках: неизвестный флаг или подкоманда — ConfigError."""

    def error(self, message: str) -> NoReturn:
        raise ConfigError(f"Ошибка параметров запуска:\n{message}")


def _common_parser() -> argparse.ArgumentParser:
    p = _Parser(add_help=False, exit_on_error=False)
    run = p.add_argument_group("запуск")
    run.add_argument("--config", type=Path, help="YAML-файл конфигурации")
    run.add_argument("--json", action="store_true", help="Вывод в stdout в JSON")
    run.add_argument("--out", dest="out_dir", type=Path, help="Каталог пакета отчётов")

    group = p.add_argument_group("группа и символ")
    group.add_argument("--group", help="Группа: p2d1, p3, vilenkin:2,3,5")
    group.add_argument("--level", type=int, help="Уровень усечения N")
    group.add_argument("--levels", help="Диапазон уровней A..B")
    for suffix, label in (("", ""), ("2", " (второй символ)")):
        group.add_argument(f"--symbol{suffix}", help=f"Выражение символа{label}")
        group.add_argument(f"--builtin{suffix}", help=f"Встроенный символ{label}: vladimirov:s=1")
        group.add_argument(f"--csv{suffix}", type=Path, help=f"CSV-файл символа{label}")
    group.add_argument("--function", type=Path, help="JSON-файл функции для apply")
    group.add_argument("--function-expr", help="Выражение функции от x для apply")

    ops = p.add_argument_group("параметры операций")
    ops.add_argument("--trials", type=int)
    ops.add_argument("--seed", type=int)
    ops.add_argument("--gamma", type=float)
    ops.add_argument("--r", type=float)
    ops.add_argument("--w", type=float)
    ops.add_argument("--r2", type=float)
    ops.add_argument("--s-from", type=float)
    ops.add_argument("--s-to", type=float)
    ops.add_argument("--lam", help="Комплексное λ: 2, 0.5-1j")
    ops.add_argument("--shell-min", type=int)
    ops.add_argument("--cutoffs", type=int_list, help="Пороги оболочек: 0,1,2")
    ops.add_argument("--m", type=float, help="Порядок m")
    ops.add_argument("--rho", type=float)
    ops.add_argument("--delta", type=float)
    ops.add_argument("--alpha-max", type=int)
    ops.add_argument("--beta-max", type=int)
    ops.add_argument("--scale", choices=[s.value for s in Scale])
    ops.add_argument(
        "--order", type=float, help="Порядок n (Вейль); по умолчанию s встроенного vladimirov/bessel, иначе 1"
    )
    ops.add_argument("--alpha", type=float, help="Параметр α эталонного показателя Вейля")
    ops.add_argument("--sobolev-orders", type=float_list, help="Порядки s: 0,1,2")
    ops.add_argument("--repeats", type=int, help="Повторы замера transform-bench")
    ops.add_argument("--matrix-cap", type=int)
    return p


# Ключи Namespace, не относящиеся к SpectraConfig
_RUNTIME_KEYS = frozenset({"command", "config", "json"})


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    p = _Parser(prog="spectra", exit_on_error=False)
    sub = p.add_subparsers(dest="command", metavar="<подкоманда>", required=True)
    for command in Subcommand:
        sub.add_parser(command.value, parents=[common], help=_HELP[command], exit_on_error=False)
    return p


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    try:
        args = build_parser().parse_args(argv)
    except argparse.ArgumentError as e:
        raise ConfigError(f"Ошибка параметров запуска:\n{e}") from None
    args.command = Subcommand(args.command)
    return args


def config_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Явно заданные флаги → ключи конфигурации."""
    return {
        key: value
        for key, value in vars(args).items()
        if key not in _RUNTIME_KEYS and value is not None
    }
