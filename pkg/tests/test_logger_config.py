import logging

from projects.utils.logger_config import CustomFormatter, setup_logger


def _record(level, msg):
    return logging.LogRecord("treemix.chain", level, "/x/chain.py", 42, msg, None, None)


def test_level_names():
    fmt = CustomFormatter(datefmt="%H:%M:%S")
    assert "[treemix.chain:info] π_4 생성" in fmt.format(_record(logging.INFO, "π_4 생성"))
    assert "[treemix.chain:wrong]" in fmt.format(_record(logging.WARNING, "w"))


def test_error_location_box():
    text = CustomFormatter().format(_record(logging.ERROR, "실패"))
    assert ">>> ERROR LOCATION: chain.py:42 <<<" in text
    assert text.endswith("실패")


def test_file_handlers(tmp_path, monkeypatch):
    monkeypatch.setenv("TREEMIX_LOG_TO_FILE", "true")
    logger = setup_logger("unit", log_dir=str(tmp_path))
    logger.warning("기록")
    for handler in logger.handlers:
        handler.flush()
    logs = [p.name for p in tmp_path.iterdir()]
    assert any(name.startswith("unit_") and "error" not in name for name in logs)
    assert not any("error" in name for name in logs)
    for handler in logger.handlers:
        handler.close()
    logger.handlers.clear()


def test_console_only_when_disabled(monkeypatch, tmp_path):
    monkeypatch.setenv("TREEMIX_LOG_TO_FILE", "false")
    logger = setup_logger("quiet", log_dir=str(tmp_path))
    assert len(logger.handlers) == 1
    assert list(tmp_path.iterdir()) == []
