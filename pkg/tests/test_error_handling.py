import json
import logging

import pytest

from parity_audit.errors import (
    CohortFileNotFoundError,
    InvalidConfigError,
    NoEventsError,
    ParityAuditError,
    RowValueError,
)
from parity_audit.helpers import StructuredLogger, log_execution_time


def test_exit_codes_by_family():
    assert CohortFileNotFoundError("x.csv").exit_code == 2
    assert InvalidConfigError("alpha", "out of range").exit_code == 2
    assert NoEventsError().exit_code == 3
    assert ParityAuditError("boom").exit_code == 4


def test_log_fields_carry_details():
    error = RowValueError(7, "days", "abc", "is not an integer", "cohort.csv")
    fields = error.to_log_fields()
    assert fields["error_type"] == "RowValueError"
    assert fields["line"] == 7
    assert fields["column"] == "days"
    assert fields["exit_code"] == 2
    assert "cohort.csv:7" in str(error)


def test_execution_time_decorator_logs_and_reraises(log_file):
    logger = StructuredLogger("parity_audit.cli", "cli")

    @log_execution_time(logger, "audit")
    def failing():
        raise NoEventsError()

    with pytest.raises(NoEventsError):
        failing()

    with open(log_file, "r", encoding="utf-8") as f:
        entry = [json.loads(line) for line in f][-1]
    assert entry["message"] == "audit failed"
    assert entry["status"] == "error"
    assert entry["exception"]["type"] == "NoEventsError"
    assert entry["duration_ms"] >= 0


def test_execution_time_decorator_success(log_file):
    logger = StructuredLogger("parity_audit.cli", "cli")

    @log_execution_time(logger, "curves")
    def ok():
        return 42

    assert ok() == 42
    with open(log_file, "r", encoding="utf-8") as f:
        entry = [json.loads(line) for line in f][-1]
    assert entry["status"] == "success"


def test_logger_handles_write_error(log_file, mocker):
    logger = StructuredLogger("parity_audit.cli", "cli")
    broken = mocker.Mock()
    broken.write.side_effect = OSError("Disk full")
    broken.tell.return_value = 0
    handlers = logging.getLogger("parity_audit").handlers
    assert handlers
    reported = [mocker.patch.object(h, "handleError") for h in handlers]
    for handler in handlers:
        mocker.patch.object(handler, "stream", broken)

    try:
        logger.error("This should not crash")
    except OSError as exc:
        pytest.fail(f"Logger raised exception: {exc}")
    assert all(r.called for r in reported)
