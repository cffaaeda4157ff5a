import json
import re
from pathlib import Path

from parity_audit.cli import main
from parity_audit.context import AuditContext, generate_run_id, get_run_id
from parity_audit.helpers import StructuredLogger

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"


def test_log_contains_run_id(log_file):
    logger = StructuredLogger("parity_audit.cli", "cli")
    run_id = generate_run_id()
    with AuditContext(run_id=run_id):
        logger.info("Operation started")

    with open(log_file, "r", encoding="utf-8") as f:
        data = [json.loads(line) for line in f][-1]

    assert data["run_id"] == run_id


def test_generated_run_id_is_usable_as_directory_name():
    run_id = generate_run_id()
    assert re.fullmatch(r"\d{8}T\d{6}Z-[0-9a-f]{8}", run_id)
    assert generate_run_id() != run_id


def test_context_is_restored_after_block():
    assert get_run_id() is None
    with AuditContext(run_id="outer"):
        with AuditContext(run_id="inner"):
            assert get_run_id() == "inner"
        assert get_run_id() == "outer"
    assert get_run_id() is None


def test_cli_run_logs_carry_run_directory_id(tmp_path):
    code = main([
        "calibrate", "--dag-config", str(CONFIG_DIR / "dag_h0.yml"),
        "--replications", "100", "--n-per-group", "30",
    ])
    assert code == 0
    (run_dir,) = [p for p in (tmp_path / "out").iterdir() if p.name.startswith("run-")]
    with open(run_dir / "logs" / "parity_audit.json.log", "r", encoding="utf-8") as f:
        entries = [json.loads(line) for line in f]

    run_ids = {e.get("run_id") for e in entries}
    assert run_ids == {run_dir.name[len("run-"):]}
    events = [e.get("event") for e in entries]
    assert "run.started" in events
    assert "calibration.completed" in events
    assert events[-1] == "run.completed"
