import logging
from pathlib import Path

import numpy as np
import pytest

from parity_audit.logging_config import setup_logging
from parity_audit.simulation import load_dag_config
from parity_audit.survival import EventRecord

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"


def _close_handlers():
    logger = logging.getLogger("parity_audit")
    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)


@pytest.fixture(scope="function")
def log_file(tmp_path, monkeypatch):
    monkeypatch.delenv("PARITY_AUDIT_LOG_LEVEL", raising=False)
    log_dir = tmp_path / "logs"
    setup_logging(environment="production", log_dir=log_dir, level="DEBUG")
    yield log_dir / "parity_audit.json.log"
    _close_handlers()


@pytest.fixture(autouse=True)
def output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("PARITY_AUDIT_OUTPUT_DIR", str(tmp_path / "out"))
    yield
    _close_handlers()


def make_records(rng, n_a, n_b, stratum="low", max_time=30, censor_rate=0.3, groups=("A", "B")):
    """Случайная когорта из двух групп с совпадающими временами и цензурированием"""
    records = []
    for label, n in zip(groups, (n_a, n_b)):
        for _ in range(n):
            records.append(EventRecord(
                group=label,
                stratum=stratum,
                time=int(rng.integers(0, max_time + 1)),
                event=bool(rng.random() >= censor_rate),
            ))
    return records


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def dag_h0():
    return load_dag_config(CONFIG_DIR / "dag_h0.yml")


@pytest.fixture
def dag_h1():
    return load_dag_config(CONFIG_DIR / "dag_h1.yml")


@pytest.fixture
def dag_h1_null():
    return load_dag_config(CONFIG_DIR / "dag_h1_null.yml")


@pytest.fixture
def write_cohort(tmp_path):
    def _write(text, name="cohort.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8", newline="\n")
        return path
    return _write
