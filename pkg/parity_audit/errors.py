"""
Иерархия исключений parity_audit

Каждое исключение несет exit_code, который CLI возвращает процессу:
    2 - ошибка входных данных или конфигурации
    3 - статистическая вырожденность
    4 - нарушение внутреннего инварианта / ошибка вывода
"""

from typing import Any, Optional


class ParityAuditError(Exception):
    """Базовое исключение пакета"""

    exit_code: int = 4

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_log_fields(self) -> dict:
        """Поля для структурированного лога"""
        return {
            'error_type': type(self).__name__,
            'error': self.message,
            'exit_code': self.exit_code,
            **self.details,
        }


# Ингест


class IngestError(ParityAuditError):
    exit_code = 2


class CohortFileNotFoundError(IngestError):
    def __init__(self, path: str):
        super().__init__(f"Cohort file not found: {path}", path=str(path))
        self.path = str(path)


class HeaderMissingColumnError(IngestError):
    def __init__(self, column: str, path: Optional[str] = None):
        super().__init__(
            f"Header is missing column '{column}'" + (f" in {path}" if path else ""),
            column=column,
            path=str(path) if path else None,
        )
        self.column = column


class NoRowsSurviveError(IngestError):
    def __init__(self, path: Optional[str] = None, **counts: int):
        super().__init__(
            "No rows survive filtering" + (f" in {path}" if path else ""),
            path=str(path) if path else None,
            **counts,
        )


class RowValueError(IngestError):
    """Значение не проходит проверку типа; line - номер строки файла (заголовок = 1)"""

    def __init__(self, line: int, column: str, value: Any, reason: str, path: Optional[str] = None):
        location = f"{path}:{line}" if path else f"line {line}"
        super().__init__(
            f"{location}: column '{column}' value {value!r} {reason}",
            line=line,
            column=column,
            value=str(value),
            path=str(path) if path else None,
        )
        self.line = line
        self.column = column
        self.value = value


class ScoreOutOfRangeError(IngestError):
    def __init__(self, score: int, low: Optional[int], high: Optional[int]):
        super().__init__(
            f"Score {score} outside declared range [{low}, {high}]",
            score=score,
            score_min=low,
            score_max=high,
        )
        self.score = score


# Конфигурация


class ConfigError(ParityAuditError):
    exit_code = 2


class InvalidConfigError(ConfigError):
    def __init__(self, field: str, reason: str, source: Optional[str] = None):
        super().__init__(
            f"Invalid config field '{field}': {reason}" + (f" ({source})" if source else ""),
            field=field,
            source=source,
        )
        self.field = field


class UnknownPresetError(ConfigError):
    def __init__(self, name: str, available: list):
        super().__init__(
            f"Unknown preset '{name}', available: {', '.join(available)}",
            preset=name,
        )


class WrongHypothesisError(ConfigError):
    def __init__(self, expected: str, actual: str):
        super().__init__(
            f"Config is tagged {actual}, operation requires {expected}",
            expected=expected,
            actual=actual,
        )


class UsageError(ConfigError):
    pass


# Статистика


class StatisticsError(ParityAuditError):
    exit_code = 3


class EmptyCohortError(StatisticsError):
    def __init__(self):
        super().__init__("Cohort has no records")


class SingleGroupError(StatisticsError):
    def __init__(self, labels: list):
        super().__init__(
            f"Comparison needs two group labels, got {len(labels)}: {labels}",
            labels=list(labels),
        )


class TooManyGroupsError(StatisticsError):
    def __init__(self, labels: list):
        super().__init__(
            f"Only two-group comparisons are supported, got {len(labels)}: {labels}",
            labels=list(labels),
        )


class UnknownGroupError(StatisticsError):
    def __init__(self, label: str, labels: list):
        super().__init__(
            f"Group label '{label}' is not one of {labels}",
            label=label,
            labels=list(labels),
        )


class MixedStrataError(StatisticsError):
    def __init__(self, strata: list):
        super().__init__(
            f"Records span several strata: {strata}",
            strata=list(strata),
        )


class NoEventsError(StatisticsError):
    def __init__(self):
        super().__init__("Pooled cohort has no observed events")


class NegativeStatisticError(StatisticsError):
    def __init__(self, value: float):
        super().__init__(f"Chi-square statistic must be non-negative, got {value}", value=value)


class NonPositiveHorizonError(StatisticsError):
    def __init__(self, horizon: Any):
        super().__init__(f"Horizon must be a positive number of days, got {horizon}", horizon=horizon)


class InvalidHorizonGridError(StatisticsError):
    def __init__(self, reason: str):
        super().__init__(f"Invalid horizon grid: {reason}")


class ProbabilityOutOfRangeError(StatisticsError):
    def __init__(self, value: Any):
        super().__init__(f"Probability must lie in [0, 1], got {value}", value=value)


class UnknownStratumError(StatisticsError):
    def __init__(self, stratum: str, available: list):
        super().__init__(
            f"Unknown stratum '{stratum}', available: {available}",
            stratum=stratum,
        )


# Вывод и инварианты


class ReportError(ParityAuditError):
    exit_code = 4


class IoFailureError(ReportError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"Failed to write {path}: {reason}", path=str(path))


class InvariantViolationError(ParityAuditError):
    exit_code = 4
