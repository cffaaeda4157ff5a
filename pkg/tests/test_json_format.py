import json

from parity_audit.helpers import StructuredLogger, stratum_logger


def test_json_log_structure(log_file):
    logger = StructuredLogger("parity_audit.survival", "survival")
    msg = "Stratum tested"
    logger.info(msg)

    with open(log_file, "r", encoding="utf-8") as f:
        data = [json.loads(line) for line in f][-1]

    assert "timestamp" in data
    assert data["timestamp"].endswith("Z")
    assert data["message"] == msg
    assert data["level"] == "INFO"
    assert data["logger"] == "parity_audit.survival"
    assert data["component"] == "survival"
    assert data["service"] == "parity-audit"
    assert set(data["location"]) == {"file", "line", "function", "module"}


def test_stratum_logger_carries_stratum(log_file):
    stratum_logger.log_tested("low", chi_square=4.2, p_value=0.04, band="significant", n_subjects=100, n_events=30)

    with open(log_file, "r", encoding="utf-8") as f:
        data = [json.loads(line) for line in f][-1]

    assert data["event"] == "stratum.tested"
    assert data["stratum"] == "low"
    assert data["p_value"] == 0.04
    assert data["band"] == "significant"


def test_non_ascii_is_kept(log_file):
    StructuredLogger("parity_audit.ingest").info("Когорта загружена")
    raw = log_file.read_text(encoding="utf-8")
    assert "Когорта загружена" in raw
