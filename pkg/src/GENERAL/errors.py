"""Иерархия исключений приложения.

Каждое исключение знает свой код завершения (`exit_code`), машинный код для
префикса ``error[CODE]:`` (`code`) и короткое сообщение для лога (`log_message`).
Точка входа (main.py) переводит исключение в код возврата процесса.
"""


class AppError(Exception):
    exit_code: int = 1
    code: str = "APP"
    log_message: str = "Ошибка приложения"


class ConfigError(AppError):
    code = "CONFIG"
    log_message = "Ошибка в конфигурации"


class ConfigLoadError(ConfigError):
    """
    Ошибка загрузки/разбора/валидации файла конфигурации.
    Используется как единый тип исключения для внешнего слоя приложения.
    """

    log_message = "Ошибка файла конфигурации"


class LocalFileAccessError(AppError, OSError):
    code = "IO"
    log_message = "Ошибка доступа к локальным файлам/каталогам"


class UserAbend(AppError):
    exit_code = 130
    code = "ABORT"
    log_message = "Пользователь прекратил работу"


# ---------- группа и уровень ----------
class InvalidDescriptor(AppError):
    code = "DESCRIPTOR"
    log_message = "Некорректное описание группы"


class LevelTooLarge(AppError):
    code = "LEVEL"
    log_message = "Уровень усечения слишком велик"


class MatrixTooLarge(LevelTooLarge):
    log_message = "Плотная матрица превышает допустимый размер"


class LevelTooCoarse(AppError):
    code = "LEVEL"
    log_message = "Двойственный индекс мельче уровня усечения"


class LevelMismatch(AppError):
    code = "LEVEL"
    log_message = "Объекты относятся к разным уровням"


class GroupMismatch(AppError):
    code = "GROUP"
    log_message = "Объекты относятся к разным группам"


class BadExponent(AppError):
    code = "EXPONENT"
    log_message = "Недопустимый показатель"


class EmptyGrid(AppError):
    code = "GRID"
    log_message = "Пустая сетка значений"


# ---------- язык символов ----------
class ExprSyntaxError(AppError):
    """Синтаксическая ошибка выражения символа с позицией."""

    code = "SYNTAX"
    log_message = "Синтаксическая ошибка в выражении символа"

    def __init__(self, line: int, col: int, expected: str, found: str = "") -> None:
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        super().__init__(
            f"строка {line}, позиция {col}: ожидалось {expected}"
            + (f", найдено {found!r}" if found else "")
        )


class EvalError(AppError):
    """Ошибка вычисления выражения (log 0, деление на 0, ...) с позицией узла."""

    code = "EVAL"
    log_message = "Ошибка вычисления символа"

    def __init__(self, message: str, line: int = 0, col: int = 0) -> None:
        self.line = line
        self.col = col
        super().__init__(f"строка {line}, позиция {col}: {message}" if line else message)


# ---------- хранение ----------
class FormatError(AppError):
    code = "FORMAT"
    log_message = "Нарушен формат файла"

    def __init__(self, reason: str, offset: int | None = None) -> None:
        self.reason = reason
        self.offset = offset
        super().__init__(reason if offset is None else f"смещение {offset}: {reason}")


class VerifyError(AppError):
    code = "VERIFY"
    log_message = "Контрольные суммы пакета отчётов не совпадают"


# ---------- численные ошибки ----------
class NumericalError(AppError):
    exit_code = 2
    code = "NUMERIC"
    log_message = "Численная ошибка"


class NumericalFailure(NumericalError):
    log_message = "Разложение не сошлось"


class SingularMatrix(NumericalError):
    log_message = "Матрица вырождена на данном уровне"


class SymbolZero(NumericalError):
    log_message = "Символ σ−λ обращается в ноль в узле сетки"
