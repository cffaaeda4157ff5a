"""
Parity Audit

Аудит контрфактического паритета групп по времени до события:
- Кривые Каплана-Мейера и лог-ранк тест внутри страт решения
- Временной ряд p-значений при административном усечении
- Синтетические когорты из структурной модели и калибровка теста
- Отчеты JSON / CSV / SVG и структурированные логи
"""

__version__ = "1.0.0"
__author__ = "Alexander132770"

from .config import (
    AuditConfig,
    ColumnMapping,
    HorizonGrid,
    ScoreQuantizer,
    available_presets,
    load_mapping,
    load_preset,
)
from .context import (
    AuditContext,
    bind_context,
    clear_all_context,
    generate_run_id,
    get_current_context,
    get_run_id,
    set_run_id,
    with_audit_context,
)
from .errors import ParityAuditError
from .helpers import (
    LogEvent,
    StructuredLogger,
    cli_logger,
    ingest_logger,
    log_execution_time,
    report_logger,
    simulation_logger,
    stratum_logger,
)
from .logging_config import setup_logging
from .survival import (
    EventRecord,
    LogRankResult,
    SignificanceBand,
    SurvivalCurve,
    build_risk_table,
    chi_square_sf,
    classify,
    kaplan_meier,
    logrank,
    pvalue_timeline,
    truncate_at_horizon,
)

__all__ = [
    '__version__',
    # Конфигурация
    'AuditConfig',
    'ColumnMapping',
    'HorizonGrid',
    'ScoreQuantizer',
    'available_presets',
    'load_mapping',
    'load_preset',
    # Контекст
    'AuditContext',
    'bind_context',
    'clear_all_context',
    'generate_run_id',
    'get_current_context',
    'get_run_id',
    'set_run_id',
    'with_audit_context',
    # Логирование
    'LogEvent',
    'StructuredLogger',
    'cli_logger',
    'ingest_logger',
    'log_execution_time',
    'report_logger',
    'setup_logging',
    'simulation_logger',
    'stratum_logger',
    # Ошибки
    'ParityAuditError',
    # Анализ выживаемости
    'EventRecord',
    'LogRankResult',
    'SignificanceBand',
    'SurvivalCurve',
    'build_risk_table',
    'chi_square_sf',
    'classify',
    'kaplan_meier',
    'logrank',
    'pvalue_timeline',
    'truncate_at_horizon',
]


def quick_setup(environment: str = 'development', log_dir=None):
    """
    Быстрая настройка логирования для интерактивной работы

    Example:
        >>> from parity_audit import quick_setup
        >>> loggers = quick_setup('development')
        >>> loggers['ingest'].log_summary({'n_total': 10, 'n_events': 3})
    """
    setup_logging(environment=environment, log_dir=log_dir)
    return {
        'ingest': ingest_logger,
        'stratum': stratum_logger,
        'simulation': simulation_logger,
        'report': report_logger,
        'cli': cli_logger,
    }

