import json
import logging

from parity_audit.helpers import StructuredLogger
from parity_audit.logging_config import build_logging_config, setup_logging


def _console_handler():
    handlers = logging.getLogger("parity_audit").handlers
    return next(h for h in handlers if type(h) is logging.StreamHandler)


def test_level_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("PARITY_AUDIT_LOG_LEVEL", "ERROR")
    setup_logging(environment="production", log_dir=tmp_path / "logs")
    assert _console_handler().level == logging.ERROR

    logger = StructuredLogger("parity_audit.cli", "cli")
    logger.debug("debug message")
    logger.error("critical failure")

    with open(tmp_path / "logs" / "parity_audit.json.log", "r", encoding="utf-8") as f:
        logs = [json.loads(line) for line in f]

    assert any(entry["message"] == "critical failure" for entry in logs)
    assert not any(entry["message"] == "debug message" for entry in logs)


def test_reconfiguring_changes_level(tmp_path):
    logger = StructuredLogger("parity_audit.cli", "cli")
    setup_logging(environment="production", log_dir=tmp_path / "first", level="DEBUG")
    logger.debug("before reload")
    setup_logging(environment="production", log_dir=tmp_path / "second", level="INFO")
    logger.debug("after reload")
    logger.info("still informative")

    first = (tmp_path / "first" / "parity_audit.json.log").read_text(encoding="utf-8")
    second = (tmp_path / "second" / "parity_audit.json.log").read_text(encoding="utf-8")
    assert "before reload" in first
    assert "after reload" not in second
    assert "still informative" in second


def test_console_only_without_log_dir():
    config = build_logging_config("development", None, "info")
    assert config["loggers"]["parity_audit"]["handlers"] == ["console_simple"]
    assert config["handlers"]["console_simple"]["level"] == "INFO"
    assert "file_json" not in config["handlers"]
