"""
Ядро анализа выживаемости: таблицы риска, кривые Каплана-Мейера,
лог-ранк тест и временные ряды p-значений
"""

from .kaplan_meier import kaplan_meier, kaplan_meier_arrays, pooled_curve
from .logrank import chi_square_sf, logrank, logrank_arrays
from .models import (
    EventRecord,
    LogRankResult,
    RiskTable,
    RiskTableRow,
    SignificanceBand,
    SurvivalCurve,
    SurvivalStep,
    TimelinePoint,
)
from .risk_table import build_risk_table
from .timeline import (
    classify,
    default_horizons,
    first_significant_horizon,
    pvalue_timeline,
    truncate_at_horizon,
)

__all__ = [
    'EventRecord',
    'LogRankResult',
    'RiskTable',
    'RiskTableRow',
    'SignificanceBand',
    'SurvivalCurve',
    'SurvivalStep',
    'TimelinePoint',
    'build_risk_table',
    'chi_square_sf',
    'classify',
    'default_horizons',
    'first_significant_horizon',
    'kaplan_meier',
    'kaplan_meier_arrays',
    'logrank',
    'logrank_arrays',
    'pooled_curve',
    'pvalue_timeline',
    'truncate_at_horizon',
]
