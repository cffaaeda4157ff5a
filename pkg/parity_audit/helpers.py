"""
Вспомогательные функции и классы для логирования
Специфичные для домена аудита паритета по времени до события
"""

import functools
import logging
import time
from enum import Enum
from typing import Any, Callable, Dict, Optional

from .context import AuditContext


class LogEvent(str, Enum):
    """Стандартизированные события для логирования"""

    # Когорта
    COHORT_PARSED = "cohort.parsed"
    COHORT_ROW_DROPPED = "cohort.row_dropped"
    COHORT_SUMMARY = "cohort.summary"

    # Страты и тесты
    STRATUM_TESTED = "stratum.tested"
    STRATUM_DEGENERATE = "stratum.degenerate"
    STRATUM_SKIPPED = "stratum.skipped"
    TIMELINE_COMPUTED = "timeline.computed"
    TIMELINE_FIRST_SIGNIFICANT = "timeline.first_significant"

    # Симуляция
    SIMULATION_GENERATED = "simulation.generated"
    CALIBRATION_COMPLETED = "calibration.completed"

    # Отчет
    REPORT_EMITTED = "report.emitted"

    # Прогон
    RUN_STARTED = "run.started"
    RUN_COMPLETED = "run.completed"
    RUN_FAILED = "run.failed"


class StructuredLogger:
    """
    Обертка над стандартным logger с поддержкой структурированного логирования
    """

    def __init__(self, name: str, component: Optional[str] = None):
        self.logger = logging.getLogger(name)
        self.component = component or name.rsplit('.', 1)[-1]

    def _log(
        self,
        level: int,
        message: str,
        event: Optional[LogEvent] = None,
        exc_info=None,
        **extra_fields
    ):
        """Внутренний метод для логирования"""
        extra = {
            'component': self.component,
            'extra_fields': extra_fields.copy(),
        }
        if event:
            extra['extra_fields']['event'] = event.value

        self.logger.log(level, message, extra=extra, exc_info=exc_info)

    def debug(self, message: str, event: Optional[LogEvent] = None, **extra_fields):
        self._log(logging.DEBUG, message, event, **extra_fields)

    def info(self, message: str, event: Optional[LogEvent] = None, **extra_fields):
        self._log(logging.INFO, message, event, **extra_fields)

    def warning(self, message: str, event: Optional[LogEvent] = None, **extra_fields):
        self._log(logging.WARNING, message, event, **extra_fields)

    def error(self, message: str, event: Optional[LogEvent] = None, exc_info=None, **extra_fields):
        self._log(logging.ERROR, message, event, exc_info=exc_info, **extra_fields)

    def critical(self, message: str, event: Optional[LogEvent] = None, exc_info=None, **extra_fields):
        self._log(logging.CRITICAL, message, event, exc_info=exc_info, **extra_fields)


class IngestLogger:
    """Специализированный логгер для загрузки когорт"""

    def __init__(self):
        self.logger = StructuredLogger('parity_audit.ingest', 'ingest')

    def log_parsed(self, path: str, n_rows: int, n_dropped_missing: int, columns: list):
        """Логирует разбор файла когорты"""
        self.logger.info(
            f"Cohort parsed: {path}",
            event=LogEvent.COHORT_PARSED,
            path=str(path),
            n_rows=n_rows,
            n_dropped_missing=n_dropped_missing,
            columns=columns,
        )

    def log_row_dropped(self, line: int, reason: str, value: Any = None):
        """Логирует исключенную строку"""
        self.logger.debug(
            f"Row {line} dropped: {reason}",
            event=LogEvent.COHORT_ROW_DROPPED,
            line=line,
            reason=reason,
            value=None if value is None else str(value),
        )

    def log_summary(self, summary: Dict[str, Any]):
        """Логирует сводку когорты"""
        self.logger.info(
            f"Cohort summary: {summary.get('n_total')} records, {summary.get('n_events')} events",
            event=LogEvent.COHORT_SUMMARY,
            **summary,
        )


class StratumLogger:
    """Специализированный логгер для тестов по стратам"""

    def __init__(self):
        self.logger = StructuredLogger('parity_audit.survival', 'survival')

    def log_tested(
        self,
        stratum: str,
        chi_square: float,
        p_value: float,
        band: str,
        n_subjects: int,
        n_events: int,
    ):
        """Логирует результат лог-ранк теста за весь период"""
        with AuditContext(stratum=stratum):
            self.logger.info(
                f"Stratum tested: {stratum} (p={p_value:.4g}, {band})",
                event=LogEvent.STRATUM_TESTED,
                chi_square=chi_square,
                p_value=p_value,
                band=band,
                n_subjects=n_subjects,
                n_events=n_events,
            )

    def log_degenerate(self, stratum: str, horizon: Optional[int] = None):
        """Логирует нулевую дисперсию"""
        with AuditContext(stratum=stratum, horizon=horizon):
            self.logger.warning(
                f"Degenerate variance in stratum {stratum}",
                event=LogEvent.STRATUM_DEGENERATE,
            )

    def log_skipped(self, stratum: str, reason: str):
        with AuditContext(stratum=stratum):
            self.logger.warning(
                f"Stratum skipped: {stratum} ({reason})",
                event=LogEvent.STRATUM_SKIPPED,
                reason=reason,
            )

    def log_timeline(self, stratum: str, n_horizons: int, first_significant: Optional[int]):
        """Логирует расчет временного ряда p-значений"""
        with AuditContext(stratum=stratum):
            self.logger.info(
                f"Timeline computed: {stratum}, {n_horizons} horizons",
                event=LogEvent.TIMELINE_COMPUTED,
                n_horizons=n_horizons,
                first_significant_horizon=first_significant,
            )
            if first_significant is not None:
                self.logger.info(
                    f"First significant horizon for {stratum}: day {first_significant}",
                    event=LogEvent.TIMELINE_FIRST_SIGNIFICANT,
                    first_significant_horizon=first_significant,
                )


class SimulationLogger:
    """Специализированный логгер для симулятора и калибровки"""

    def __init__(self):
        self.logger = StructuredLogger('parity_audit.simulation', 'simulation')

    def log_generated(self, n: int, seed: int, hypothesis: str, n_events: int, rng_algorithm: str):
        self.logger.debug(
            f"Cohort simulated: n={n}, seed={seed}",
            event=LogEvent.SIMULATION_GENERATED,
            n=n,
            seed=seed,
            hypothesis=hypothesis,
            n_events=n_events,
            rng_algorithm=rng_algorithm,
        )

    def log_calibration(
        self,
        kind: str,
        rejection_rate: float,
        ci_low: float,
        ci_high: float,
        replications: int,
        alpha: float,
        duration_ms: float,
    ):
        """Логирует итог калибровки"""
        self.logger.info(
            f"Calibration completed: {kind} rate={rejection_rate:.4f}",
            event=LogEvent.CALIBRATION_COMPLETED,
            kind=kind,
            rejection_rate=rejection_rate,
            ci_low=ci_low,
            ci_high=ci_high,
            replications=replications,
            alpha=alpha,
            duration_ms=duration_ms,
        )


class ReportLogger:
    """Специализированный логгер для вывода отчетов"""

    def __init__(self):
        self.logger = StructuredLogger('parity_audit.report', 'report')

    def log_emitted(self, kind: str, path: str, size_bytes: int):
        self.logger.info(
            f"Report artifact emitted: {path}",
            event=LogEvent.REPORT_EMITTED,
            kind=kind,
            path=str(path),
            size_bytes=size_bytes,
        )


def log_execution_time(logger: StructuredLogger, operation_name: str):
    """
    Декоратор для логирования времени выполнения функции

    Usage:
        @log_execution_time(cli_logger, 'audit')
        def run_audit(config):
            ...
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            try:
                result = func(*args, **kwargs)
                duration_ms = (time.perf_counter() - start_time) * 1000
                logger.info(
                    f"{operation_name} completed",
                    operation=operation_name,
                    duration_ms=duration_ms,
                    status='success',
                )
                return result
            except Exception as e:
                duration_ms = (time.perf_counter() - start_time) * 1000
                logger.error(
                    f"{operation_name} failed",
                    operation=operation_name,
                    duration_ms=duration_ms,
                    status='error',
                    error=str(e),
                    exc_info=True,
                )
                raise

        return wrapper

    return decorator


# Создаем глобальные экземпляры логгеров для удобства
ingest_logger = IngestLogger()
stratum_logger = StratumLogger()
simulation_logger = SimulationLogger()
report_logger = ReportLogger()
cli_logger = StructuredLogger('parity_audit.cli', 'cli')
