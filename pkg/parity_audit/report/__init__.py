"""
Отчеты аудита: JSON, CSV и SVG
"""

from pathlib import Path
from typing import Dict, List, Union

from ..errors import IoFailureError
from ..helpers import report_logger
from .csv_writer import emit_curves_csv, emit_survival_csv
from .json_writer import emit_json, load_json
from .models import (
    SCHEMA_VERSION,
    STATUS_SINGLE_GROUP,
    STATUS_TESTED,
    AuditReport,
    ReportMetadata,
    StratumBlock,
)
from .svg import render_svg, write_svg

REPORT_FILE = 'report.json'


def write_report(
    report: AuditReport,
    out_dir: Union[str, Path],
    show_pooled: bool = False,
) -> Dict[str, List[Path]]:
    """
    Записывает все артефакты отчета в out_dir

    Args:
        show_pooled: Добавить на графики общую кривую обеих групп

    Returns:
        Dict[str, List[Path]]: Пути по видам: json, csv, svg
    """
    out_dir = Path(out_dir)
    json_path = out_dir / REPORT_FILE
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(json_path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(emit_json(report))
    except OSError as exc:
        raise IoFailureError(str(json_path), str(exc)) from exc
    report_logger.log_emitted('json', str(json_path), json_path.stat().st_size)

    return {
        'json': [json_path],
        'csv': emit_curves_csv(report, out_dir),
        'svg': [write_svg(report, block.stratum, out_dir, show_pooled=show_pooled) for block in report.strata],
    }


__all__ = [
    'REPORT_FILE',
    'SCHEMA_VERSION',
    'STATUS_SINGLE_GROUP',
    'STATUS_TESTED',
    'AuditReport',
    'ReportMetadata',
    'StratumBlock',
    'emit_curves_csv',
    'emit_survival_csv',
    'emit_json',
    'load_json',
    'render_svg',
    'write_report',
    'write_svg',
]
