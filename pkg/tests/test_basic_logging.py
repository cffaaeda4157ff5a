import json

from parity_audit import quick_setup
from parity_audit.helpers import LogEvent, StructuredLogger


def _entries(log_file):
    with open(log_file, "r", encoding="utf-8") as f:
        return [json.loads(line) for line in f]


def test_basic_log_write(log_file):
    logger = StructuredLogger("parity_audit.ingest", "ingest")
    logger.info("Simple log message")

    with open(log_file, "r", encoding="utf-8") as f:
        content = f.read().strip()
    assert "Simple log message" in content
    assert '"level": "INFO"' in content


def test_all_levels(log_file):
    logger = StructuredLogger("parity_audit.survival")
    logger.debug("debug message")
    logger.warning("warn message")
    logger.error("error message")

    levels = {e["message"]: e["level"] for e in _entries(log_file)}
    assert levels["debug message"] == "DEBUG"
    assert levels["warn message"] == "WARNING"
    assert levels["error message"] == "ERROR"


def test_event_and_fields(log_file):
    logger = StructuredLogger("parity_audit.report", "report")
    logger.info("Report artifact emitted", event=LogEvent.REPORT_EMITTED, path="report.json", size_bytes=10)

    entry = _entries(log_file)[-1]
    assert entry["event"] == "report.emitted"
    assert entry["path"] == "report.json"
    assert entry["size_bytes"] == 10
    assert entry["component"] == "report"


def test_errors_go_to_separate_file(log_file):
    logger = StructuredLogger("parity_audit.cli", "cli")
    logger.info("fine")
    logger.error("broken")

    errors = _entries(log_file.parent / "errors.json.log")
    assert [e["message"] for e in errors] == ["broken"]


def test_quick_setup_returns_domain_loggers(tmp_path, monkeypatch):
    monkeypatch.delenv("PARITY_AUDIT_LOG_LEVEL", raising=False)
    loggers = quick_setup("production", log_dir=tmp_path / "logs")
    assert set(loggers) == {"ingest", "stratum", "simulation", "report", "cli"}
    loggers["ingest"].log_summary({"n_total": 10, "n_events": 3})

    entry = _entries(tmp_path / "logs" / "parity_audit.json.log")[-1]
    assert entry["event"] == "cohort.summary"
    assert entry["n_total"] == 10
