"""Точка входа CLI-приложения спектрального анализа псевдодифференциальных операторов (SPECTRA_APP).

Модуль разбирает командную строку, загружает и проверяет конфигурацию, настраивает
логирование, собирает сервисы и запускает контроллер подкоманды.

Архитектура (в общих чертах):
- CLI → парсинг аргументов, загрузка YAML-конфигурации, наложение флагов
- RuntimeContext → параметры выполнения, передаваемые в сервисы
- SpectraController → уровни, сервис подкоманды, пакет отчётов, вывод

Коды завершения:
- 0   — успешное выполнение
- 1   — ошибка проверки (конфигурация, описание группы, выражение символа, формат файла,
        контрольные суммы пакета) и непредвиденные ошибки
- 2   — численная ошибка (разложение не сошлось, вырожденная матрица, нуль σ − λ)
- 130 — остановлено пользователем (Ctrl+C)

Ошибки пишутся в stderr с машинно-разбираемым префиксом ``error[CODE]:``.
"""

import sys
from collections.abc import Sequence


def report_error(code: str, message: object) -> None:
    print(f"error[{code}]: {message}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    """Запуск CLI-приложения.

    Последовательность действий:
    1) Парсит аргументы командной строки.
    2) Загружает конфигурацию (файл ``--config`` + явно заданные флаги).
    3) Формирует RuntimeContext и настраивает логирование.
    4) Инициализирует `SpectraController` с сервисами и запускает run().

    Returns
        int: код завершения процесса.
    """
    from SPECTRA_APP.CONFIG.config_CLI import config_overrides, parse_args

    from GENERAL.errors import AppError, ConfigError, UserAbend

    try:
        args = parse_args(argv)
    except SystemExit as e:
        # argparse завершает тут (--help / -h, ошибки разбора)
        return int(e.code) if isinstance(e.code, int) else 0
    except ConfigError as e:
        report_error(e.code, e)
        return e.exit_code

    # Дальше можно тянуть всё тяжёлое (numpy/scipy)
    from loguru import logger
    from pydantic import ValidationError

    from GENERAL.config import SpectraEnv
    from GENERAL.loadconfig import load_config
    from GENERAL.setup_loguru import setup_loguru
    from SPECTRA_APP.ADAPTERS.bundle import ReportBundle
    from SPECTRA_APP.APP.controller import SpectraController
    from SPECTRA_APP.APP.dto import RuntimeContext
    from SPECTRA_APP.APP.SERVICES.bench_service import DefaultBenchService
    from SPECTRA_APP.APP.SERVICES.calculus_service import DefaultCalculusService
    from SPECTRA_APP.APP.SERVICES.compactness_service import DefaultCompactnessService
    from SPECTRA_APP.APP.SERVICES.hoermander_service import DefaultHoermanderService
    from SPECTRA_APP.APP.SERVICES.operator_service import DefaultOperatorService
    from SPECTRA_APP.APP.SERVICES.report_service import DefaultReportService
    from SPECTRA_APP.APP.SERVICES.spectrum_service import DefaultSpectrumService
    from SPECTRA_APP.APP.SERVICES.symbol_loader import DefaultSymbolLoader
    from SPECTRA_APP.APP.SERVICES.verify_service import DefaultVerifyService
    from SPECTRA_APP.APP.SERVICES.weyl_service import DefaultWeylService
    from SPECTRA_APP.APP.types import Subcommand
    from SPECTRA_APP.CONFIG.config import SpectraConfig

    try:
        app = load_config(args.config, SpectraConfig, config_overrides(args))
        env = SpectraEnv()
    except ValidationError as e:
        report_error(ConfigError.code, f"SPECTRA_THREADS: {e}")
        return ConfigError.exit_code
    except AppError as e:
        report_error(e.code, e)
        return e.exit_code

    runtime = RuntimeContext(
        app=app,
        command=args.command,
        output_json=args.json,
        threads=env.threads,
    )
    setup_loguru(config=app.logging)

    operator = DefaultOperatorService()
    spectrum = DefaultSpectrumService()
    compactness = DefaultCompactnessService()
    weyl = DefaultWeylService()
    calculus = DefaultCalculusService()
    services = {
        Subcommand.ASSEMBLE: operator,
        Subcommand.APPLY: operator,
        Subcommand.SPECTRUM: spectrum,
        Subcommand.SVD: spectrum,
        Subcommand.SCHATTEN: spectrum,
        Subcommand.DIXMIER: spectrum,
        Subcommand.LORENTZ: spectrum,
        Subcommand.NUCLEAR: spectrum,
        Subcommand.HS_IDENTITY: spectrum,
        Subcommand.SANDWICH: spectrum,
        Subcommand.GOHBERG: compactness,
        Subcommand.FREDHOLM: compactness,
        Subcommand.WEYL: weyl,
        Subcommand.SECTORIAL: weyl,
        Subcommand.ELLIPTIC: weyl,
        Subcommand.HOERMANDER: DefaultHoermanderService(),
        Subcommand.COMPOSE_RESIDUAL: calculus,
        Subcommand.ADJOINT_RESIDUAL: calculus,
        Subcommand.TRANSPOSE_RESIDUAL: calculus,
        Subcommand.INVERSE_RESIDUAL: calculus,
        Subcommand.OPNORM: calculus,
        Subcommand.TRANSFORM_BENCH: DefaultBenchService(),
        Subcommand.VERIFY: DefaultVerifyService(),
    }

    try:
        controller = SpectraController(
            runtime_context=runtime,
            services=services,
            symbol_loader=DefaultSymbolLoader(app),
            bundle_factory=ReportBundle,
            report_service=DefaultReportService(),
        )
        controller.run()
        return 0

    except KeyboardInterrupt:
        logger.error("{} (Ctrl+C)", UserAbend.log_message)
        report_error(UserAbend.code, "остановлено пользователем")
        return UserAbend.exit_code

    except AppError as e:
        logger.error("{}:\n{}", e.log_message, e)
        report_error(e.code, e)
        return e.exit_code

    except Exception as e:
        logger.exception("Непредвиденная ошибка\n")
        report_error("INTERNAL", e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
