"""
Загрузка когорт: разбор файлов, схема столбцов, квантование баллов
"""

from .parser import IngestDiagnostics, RawRow, parse_cohort
from .quantizer import order_strata, quantize
from .records import (
    NORMALIZED_COLUMNS,
    CohortSummary,
    is_normalized_file,
    load_cohort,
    read_normalized,
    summarize,
    to_event_records,
    write_normalized,
)

__all__ = [
    'NORMALIZED_COLUMNS',
    'CohortSummary',
    'IngestDiagnostics',
    'RawRow',
    'is_normalized_file',
    'load_cohort',
    'order_strata',
    'parse_cohort',
    'quantize',
    'read_normalized',
    'summarize',
    'to_event_records',
    'write_normalized',
]
