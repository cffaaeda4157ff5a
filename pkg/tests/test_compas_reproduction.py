"""
Аудит публичного среза COMPAS: проверки на уровне полос значимости

Файл пользовательский и в репозиторий не входит; без него тесты пропускаются.
"""

import os
from pathlib import Path

import pytest

from parity_audit.audit import build_report
from parity_audit.config import AuditConfig, ScoreQuantizer, load_preset
from parity_audit.ingest import load_cohort
from parity_audit.survival import SignificanceBand

_CANDIDATES = [
    os.getenv("PARITY_AUDIT_COMPAS_CSV"),
    str(Path(__file__).resolve().parent / "data" / "compas-scores-two-years.csv"),
]
COMPAS_CSV = next((Path(p) for p in _CANDIDATES if p and Path(p).is_file()), None)

pytestmark = pytest.mark.skipif(
    COMPAS_CSV is None,
    reason="public COMPAS extract not found (set PARITY_AUDIT_COMPAS_CSV)",
)


def _report(quantizer=None):
    mapping = load_preset("propublica")
    config = AuditConfig(input_path=COMPAS_CSV, mapping=mapping, quantizer=quantizer or ScoreQuantizer())
    records, _ = load_cohort(COMPAS_CSV, mapping, config.quantizer)
    return build_report(config, records)


def test_medium_and_high_strata_show_no_disparity():
    report = _report()
    for stratum in ("medium", "high"):
        block = report.block(stratum)
        assert all(p.band is SignificanceBand.INSUFFICIENT for p in block.timeline if p.horizon <= 730), stratum


def test_low_stratum_becomes_significant_near_seven_months():
    block = _report().block("low")
    assert block.first_significant_horizon is not None
    assert 150 <= block.first_significant_horizon <= 330


def test_raw_scores_three_and_four_are_flagged():
    report = _report(ScoreQuantizer(mode="raw"))
    for score in ("3", "4"):
        assert report.block(score).first_significant_horizon is not None, score
