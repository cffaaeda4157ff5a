"""
Двухпанельный SVG: кривые выживаемости групп и ряд p-значений по горизонтам
"""

import io
import threading
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use('Agg')

from matplotlib.figure import Figure  # noqa: E402

from ..errors import IoFailureError  # noqa: E402
from ..helpers import report_logger  # noqa: E402
from ..survival.models import SignificanceBand  # noqa: E402
from ..survival.timeline import MARGINAL_THRESHOLD, SIGNIFICANT_THRESHOLD  # noqa: E402
from .models import AuditReport, StratumBlock, safe_name  # noqa: E402

BAND_COLORS = {
    SignificanceBand.INSUFFICIENT: '#d9d9d9',
    SignificanceBand.MARGINAL: '#f7c6c7',
    SignificanceBand.SIGNIFICANT: '#d62728',
}
GROUP_COLORS = ('#1f77b4', '#ff7f0e')

# Фиксированная соль идентификаторов и текст вместо контуров шрифта
SVG_RC = {
    'svg.hashsalt': 'parity-audit',
    'svg.fonttype': 'none',
    'path.simplify': False,
}

# matplotlib не потокобезопасен
_render_lock = threading.Lock()


def _draw_curves(ax, block: StratumBlock, show_pooled: bool = False) -> None:
    for color, (group, curve) in zip(GROUP_COLORS, block.curves.items()):
        times = [s.time for s in curve.steps]
        survival = [s.survival for s in curve.steps]
        ax.step(times, survival, where='post', color=color, label=group, gid=f'curve-{group}')
    if show_pooled and block.pooled_curve is not None:
        steps = block.pooled_curve.steps
        ax.step(
            [s.time for s in steps], [s.survival for s in steps],
            where='post', color='#555555', linestyle='--', linewidth=0.8, label='pooled', gid='curve-pooled',
        )
    ax.set_ylim(0.0, 1.02)
    ax.set_ylabel('P(no event)')
    ax.set_title(f'Stratum {block.stratum}')
    ax.legend(loc='lower left')


def _draw_timeline(ax, block: StratumBlock) -> None:
    points = block.timeline
    if not points:
        ax.text(0.5, 0.5, 'no horizons', ha='center', va='center', transform=ax.transAxes)
    else:
        horizons = [p.horizon for p in points]
        half = (horizons[1] - horizons[0]) / 2.0 if len(horizons) > 1 else 3.5
        for point in points:
            ax.axvspan(
                point.horizon - half, point.horizon + half,
                color=BAND_COLORS[point.band], linewidth=0,
                gid=f'band-{point.horizon}-{point.band.value}',
            )
        ax.plot(horizons, [p.result.p_value for p in points], color='black', marker='.', gid='pvalue-trace')
        ax.set_xlim(horizons[0] - half, horizons[-1] + half)

    ax.axhline(SIGNIFICANT_THRESHOLD, color='#8c1c13', linestyle=':', linewidth=0.8, gid='threshold-0.05')
    ax.axhline(MARGINAL_THRESHOLD, color='#8c1c13', linestyle='--', linewidth=0.8, gid='threshold-0.1')
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel('horizon (days)')
    ax.set_ylabel('p-value')


def render_svg(report: AuditReport, stratum: str, show_pooled: bool = False) -> str:
    """
    SVG-документ для страты; одинаковый отчет дает одинаковые байты

    Raises:
        UnknownStratumError: Страты нет в отчете
    """
    block = report.block(stratum)
    with _render_lock, matplotlib.rc_context(SVG_RC):
        figure = Figure(figsize=(7.0, 6.0))
        top, bottom = figure.subplots(2, 1, gridspec_kw={'height_ratios': [3, 2]})
        _draw_curves(top, block, show_pooled)
        _draw_timeline(bottom, block)
        figure.tight_layout()
        buffer = io.StringIO()
        figure.savefig(buffer, format='svg', metadata={'Date': None})
    return buffer.getvalue()


def write_svg(
    report: AuditReport,
    stratum: str,
    out_dir: Union[str, Path],
    name: Optional[str] = None,
    show_pooled: bool = False,
) -> Path:
    path = Path(out_dir) / (name or f'survival_{safe_name(stratum)}.svg')
    document = render_svg(report, stratum, show_pooled)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(document)
    except OSError as exc:
        raise IoFailureError(str(path), str(exc)) from exc
    report_logger.log_emitted('svg', str(path), path.stat().st_size)
    return path
