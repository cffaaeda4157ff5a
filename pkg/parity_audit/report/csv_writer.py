"""
Длинный формат CSV: кривые по стратам и временной ряд p-значений
"""

from pathlib import Path
from typing import List, Union

import pandas as pd

from ..errors import IoFailureError
from ..helpers import report_logger
from .models import AuditReport, StratumBlock, safe_name

CURVE_COLUMNS = ['group', 'time_days', 'survival', 'n_at_risk', 'n_events']
TIMELINE_COLUMNS = ['stratum', 'horizon_days', 'chi_square', 'p_value', 'band']
TIMELINE_FILE = 'pvalue_timeline.csv'
FLOAT_FORMAT = '%.12g'


def curves_frame(block: StratumBlock) -> pd.DataFrame:
    rows = [
        (group, s.time, s.survival, s.n_at_risk, s.n_events)
        for group, curve in block.curves.items()
        for s in curve.steps
    ]
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def timeline_frame(report: AuditReport) -> pd.DataFrame:
    rows = [
        (block.stratum, p.horizon, p.result.chi_square, p.result.p_value, p.band.value)
        for block in report.strata
        for p in block.timeline
    ]
    return pd.DataFrame(rows, columns=TIMELINE_COLUMNS)


def write_frame(frame: pd.DataFrame, path: Path, kind: str) -> Path:
    try:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n', encoding='utf-8')
    except OSError as exc:
        raise IoFailureError(str(path), str(exc)) from exc
    report_logger.log_emitted(kind, str(path), path.stat().st_size)
    return path


def _ensure_dir(out_dir: Union[str, Path]) -> Path:
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailureError(str(out_dir), str(exc)) from exc
    return out_dir


def emit_survival_csv(report: AuditReport, out_dir: Union[str, Path]) -> List[Path]:
    """Только файлы curves_<страта>.csv"""
    out_dir = _ensure_dir(out_dir)
    return [
        write_frame(curves_frame(block), out_dir / f"curves_{safe_name(block.stratum)}.csv", 'curves_csv')
        for block in report.strata
    ]


def emit_curves_csv(report: AuditReport, out_dir: Union[str, Path]) -> List[Path]:
    """
    Файл curves_<страта>.csv на каждую страту и общий pvalue_timeline.csv

    Raises:
        IoFailureError: Каталог или файл недоступен для записи
    """
    out_dir = _ensure_dir(out_dir)
    written = emit_survival_csv(report, out_dir)
    written.append(write_frame(timeline_frame(report), out_dir / TIMELINE_FILE, 'timeline_csv'))
    return written
