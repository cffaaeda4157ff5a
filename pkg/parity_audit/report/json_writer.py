"""
Сериализация отчета в JSON и обратно
"""

import json
import math
from typing import Any, Dict, Optional

from ..errors import InvariantViolationError
from ..survival.models import LogRankResult, SignificanceBand, SurvivalCurve, SurvivalStep, TimelinePoint
from .models import SCHEMA_VERSION, AuditReport, ReportMetadata, StratumBlock

SIGNIFICANT_DIGITS = 12


def fmt_float(value: float) -> float:
    """Число с 12 значащими цифрами"""
    if not math.isfinite(value):
        raise InvariantViolationError(f"Non-finite value {value} cannot be serialized")
    return float(format(value, f'.{SIGNIFICANT_DIGITS}g'))


def _result_to_dict(result: LogRankResult) -> Dict[str, Any]:
    return {
        'chi_square': fmt_float(result.chi_square),
        'p_value': fmt_float(result.p_value),
        'variance': fmt_float(result.variance),
        'dof': result.dof,
        'degenerate': result.degenerate,
        'majority_label': result.majority_label,
        'minority_label': result.minority_label,
        'observed_majority': result.observed_majority,
        'expected_majority': fmt_float(result.expected_majority),
        'observed_minority': result.observed_minority,
        'expected_minority': fmt_float(result.expected_minority),
        'n_events_total': result.n_events_total,
        'n_subjects': result.n_subjects,
        'excess_group': result.excess_group,
    }


def _result_from_dict(data: Dict[str, Any]) -> LogRankResult:
    return LogRankResult(
        chi_square=data['chi_square'],
        variance=data['variance'],
        p_value=data['p_value'],
        observed_majority=data['observed_majority'],
        expected_majority=data['expected_majority'],
        observed_minority=data['observed_minority'],
        expected_minority=data['expected_minority'],
        n_events_total=data['n_events_total'],
        n_subjects=data['n_subjects'],
        majority_label=data['majority_label'],
        minority_label=data['minority_label'],
        degenerate=data['degenerate'],
        dof=data['dof'],
    )


def _curve_to_dict(group: Optional[str], curve: SurvivalCurve) -> Dict[str, Any]:
    return {
        'group': group,
        'label': curve.label,
        'median_time': curve.median_time(),
        'steps': [
            {
                'time': s.time,
                'survival': fmt_float(s.survival),
                'n_at_risk': s.n_at_risk,
                'n_events': s.n_events,
            }
            for s in curve.steps
        ],
    }


def _curve_from_dict(data: Dict[str, Any]) -> SurvivalCurve:
    return SurvivalCurve(
        label=data['label'],
        steps=tuple(SurvivalStep(**step) for step in data['steps']),
    )


def _block_to_dict(block: StratumBlock) -> Dict[str, Any]:
    return {
        'stratum': block.stratum,
        'status': block.status,
        'counts': dict(block.counts),
        'first_significant_horizon': block.first_significant_horizon,
        'full_period': _result_to_dict(block.result) if block.result else None,
        'curves': [_curve_to_dict(group, curve) for group, curve in block.curves.items()],
        'pooled_curve': _curve_to_dict(None, block.pooled_curve) if block.pooled_curve else None,
        'timeline': [
            {'horizon': p.horizon, 'band': p.band.value, **_result_to_dict(p.result)}
            for p in block.timeline
        ],
    }


def _block_from_dict(data: Dict[str, Any]) -> StratumBlock:
    block = StratumBlock(
        stratum=data['stratum'],
        status=data['status'],
        curves={c['group']: _curve_from_dict(c) for c in data['curves']},
        counts=dict(data['counts']),
        pooled_curve=_curve_from_dict(data['pooled_curve']) if data.get('pooled_curve') else None,
        result=_result_from_dict(data['full_period']) if data.get('full_period') else None,
        timeline=tuple(
            TimelinePoint(horizon=p['horizon'], result=_result_from_dict(p), band=SignificanceBand(p['band']))
            for p in data['timeline']
        ),
    )
    if block.first_significant_horizon != data.get('first_significant_horizon'):
        raise InvariantViolationError(
            "first_significant_horizon disagrees with the timeline bands",
            stratum=block.stratum,
        )
    return block


def report_to_dict(report: AuditReport) -> Dict[str, Any]:
    m = report.metadata
    return {
        'schema_version': SCHEMA_VERSION,
        'metadata': {
            'dataset_id': m.dataset_id,
            'mapping_preset': m.mapping_preset,
            'majority_label': m.majority_label,
            'minority_label': m.minority_label,
            'alpha': fmt_float(m.alpha),
            'quantizer': m.quantizer,
            'horizon_grid': m.horizon_grid,
            'tool_version': m.tool_version,
            'seed': m.seed,
            'rng_algorithm': m.rng_algorithm,
        },
        'strata': [_block_to_dict(b) for b in report.strata],
    }


def emit_json(report: AuditReport) -> str:
    """
    JSON-документ отчета

    Порядок ключей фиксирован, числа - 12 значащих цифр, метки времени
    не записываются; одинаковый отчет дает одинаковые байты.
    """
    return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False, allow_nan=False) + '\n'


def load_json(document: str) -> AuditReport:
    """
    Восстанавливает отчет из документа emit_json

    Raises:
        InvariantViolationError: Версия схемы не поддерживается или документ противоречив
    """
    data = json.loads(document)
    version = data.get('schema_version')
    if version != SCHEMA_VERSION:
        raise InvariantViolationError(f"Unsupported report schema version {version!r}")
    meta = data['metadata']
    return AuditReport(
        metadata=ReportMetadata(
            dataset_id=meta['dataset_id'],
            majority_label=meta['majority_label'],
            minority_label=meta['minority_label'],
            alpha=meta['alpha'],
            tool_version=meta['tool_version'],
            quantizer=meta.get('quantizer') or {},
            horizon_grid=meta.get('horizon_grid') or {},
            mapping_preset=meta.get('mapping_preset'),
            seed=meta.get('seed'),
            rng_algorithm=meta.get('rng_algorithm'),
        ),
        strata=tuple(_block_from_dict(b) for b in data['strata']),
    )
