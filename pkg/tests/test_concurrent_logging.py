import concurrent.futures
import json

from parity_audit.context import AuditContext, bind_context
from parity_audit.helpers import StructuredLogger


def test_concurrent_logging(log_file):
    logger = StructuredLogger("parity_audit.survival", "survival")
    messages = [f"message_{i}" for i in range(50)]

    def log_msg(msg):
        logger.info(msg)

    with concurrent.futures.ThreadPoolExecutor(max_workers=10) as executor:
        list(executor.map(log_msg, messages))

    with open(log_file, "r", encoding="utf-8") as f:
        lines = f.readlines()

    logged_messages = [json.loads(line)["message"] for line in lines]
    assert set(messages).issubset(set(logged_messages))


def test_strata_keep_their_own_context_in_threads(log_file):
    logger = StructuredLogger("parity_audit.survival", "survival")

    def analyze(stratum):
        with AuditContext(stratum=stratum):
            logger.info(f"analyzing {stratum}")

    with AuditContext(run_id="run-threads"):
        task = bind_context(analyze)
        with concurrent.futures.ThreadPoolExecutor(max_workers=4) as executor:
            list(executor.map(task, [f"s{i}" for i in range(20)]))

    with open(log_file, "r", encoding="utf-8") as f:
        entries = [json.loads(line) for line in f if "analyzing" in line]

    assert len(entries) == 20
    for entry in entries:
        assert entry["run_id"] == "run-threads"
        assert entry["message"] == f"analyzing {entry['stratum']}"
