# noinspection PyProtectedMember
from GENERAL.config import LoggingConfig
from GENERAL.setup_loguru import _ensure_parent_dir_for_file_sink, setup_loguru


def test_ensure_parent_dir_for_file_sink_creates_parent(tmp_path):
    """Убедитесь, что функция _ensure_parent_dir_for_file_sink создаёт родительский каталог, если ей передан путь к файлу."""
    file_path = tmp_path / "a" / "b" / "logfile.txt"
    parent = file_path.parent
    assert not parent.exists()
    _ensure_parent_dir_for_file_sink(file_path)
    assert parent.exists() and parent.is_dir()


def test_ensure_parent_dir_for_file_sink_ignores_non_path_like():
    """Убедитесь, что объекты, не являющиеся строкой или путём, игнорируются."""

    class Dummy:
        pass

    _ensure_parent_dir_for_file_sink(Dummy())


def test_setup_loguru_console_only():
    """Без файлового лога настройка всегда успешна."""
    assert setup_loguru(LoggingConfig()) is True


def test_setup_loguru_writes_file(tmp_path):
    """Включённый файловый лог создаётся в заданном каталоге."""
    config = LoggingConfig.model_validate(
        {"file": {"enabled": True, "path": str(tmp_path / "logs"), "compression": "zip"}}
    )
    assert setup_loguru(config) is True

    from loguru import logger

    logger.debug("проверка")
    logger.complete()
    assert (tmp_path / "logs" / "spectra.log").exists()
    setup_loguru(LoggingConfig())


def test_setup_loguru_bad_sink_warns_and_continues(monkeypatch, tmp_path):
    """Если файловый sink не регистрируется, возвращается False без исключения."""
    import GENERAL.setup_loguru as module

    def boom(_path):
        raise OSError("нет прав")

    monkeypatch.setattr(module, "_ensure_parent_dir_for_file_sink", boom)
    config = LoggingConfig.model_validate({"file": {"enabled": True, "path": str(tmp_path / "x.log")}})
    assert setup_loguru(config) is False
    setup_loguru(LoggingConfig())
