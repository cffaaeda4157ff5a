"""
Административное усечение по горизонту и временной ряд p-значений
"""

from numbers import Real
from typing import List, Optional, Sequence

import numpy as np

from ..errors import (
    InvalidHorizonGridError,
    NoEventsError,
    NonPositiveHorizonError,
    ProbabilityOutOfRangeError,
    UnknownGroupError,
)
from .logrank import logrank_arrays
from .models import EventRecord, LogRankResult, SignificanceBand, TimelinePoint
from .risk_table import check_single_stratum, records_to_arrays, resolve_groups

SIGNIFICANT_THRESHOLD = 0.05
MARGINAL_THRESHOLD = 0.1

DEFAULT_HORIZON_START = 28
DEFAULT_HORIZON_STEP = 7


def classify(p: float) -> SignificanceBand:
    """
    Относит p-значение к полосе значимости

    p <= 0.05 -> significant, 0.05 < p <= 0.1 -> marginal, p > 0.1 -> insufficient

    Raises:
        ProbabilityOutOfRangeError: p вне [0, 1]
    """
    if not isinstance(p, Real) or not 0.0 <= p <= 1.0:
        raise ProbabilityOutOfRangeError(p)
    if p <= SIGNIFICANT_THRESHOLD:
        return SignificanceBand.SIGNIFICANT
    if p <= MARGINAL_THRESHOLD:
        return SignificanceBand.MARGINAL
    return SignificanceBand.INSUFFICIENT


def _check_horizon(horizon) -> int:
    if not isinstance(horizon, Real) or isinstance(horizon, bool) or not horizon > 0:
        raise NonPositiveHorizonError(horizon)
    if int(horizon) != horizon:
        raise InvalidHorizonGridError(f"horizon {horizon} is not a whole number of days")
    return int(horizon)


def truncate_at_horizon(records: Sequence[EventRecord], horizon: int) -> List[EventRecord]:
    """
    Административное цензурирование: всякая запись с time > horizon
    заменяется на (time = horizon, event = False); граница включена

    Raises:
        NonPositiveHorizonError: horizon <= 0
    """
    horizon = _check_horizon(horizon)
    return [
        r if r.time <= horizon else EventRecord(group=r.group, stratum=r.stratum, time=horizon, event=False)
        for r in records
    ]


def validate_horizons(horizons: Sequence[int]) -> List[int]:
    """Горизонты должны быть положительны и строго возрастать"""
    checked = [_check_horizon(h) for h in horizons]
    for previous, current in zip(checked, checked[1:]):
        if current <= previous:
            raise InvalidHorizonGridError(f"horizons must be strictly increasing ({previous} then {current})")
    return checked


def default_horizons(
    max_time: int,
    start: int = DEFAULT_HORIZON_START,
    step: int = DEFAULT_HORIZON_STEP,
    end: Optional[int] = None,
) -> List[int]:
    """
    Сетка горизонтов: каждые step дней от start до end (по умолчанию - max_time)

    Example:
        >>> default_horizons(50)
        [28, 35, 42, 49]
    """
    if start <= 0 or step <= 0:
        raise InvalidHorizonGridError(f"start and step must be positive (start={start}, step={step})")
    stop = max_time if end is None else end
    if stop < start:
        return []
    return list(range(start, stop + 1, step))


def degenerate_result(n_subjects: int, majority_label: str, minority_label: str) -> LogRankResult:
    """Результат для горизонта без событий: p = 1.0, флаг вырожденности"""
    return LogRankResult(
        chi_square=0.0,
        variance=0.0,
        p_value=1.0,
        observed_majority=0,
        expected_majority=0.0,
        observed_minority=0,
        expected_minority=0.0,
        n_events_total=0,
        n_subjects=n_subjects,
        majority_label=majority_label,
        minority_label=minority_label,
        degenerate=True,
    )


def pvalue_timeline(
    records: Sequence[EventRecord],
    horizons: Sequence[int],
    majority_label: str,
) -> List[TimelinePoint]:
    """
    Лог-ранк тест на каждом горизонте после административного усечения

    Элемент k равен logrank(truncate_at_horizon(records, horizons[k])).
    Вырожденные горизонты (нет событий или нулевая дисперсия) получают
    p = 1.0 и полосу insufficient.

    Raises:
        InvalidHorizonGridError, NonPositiveHorizonError, SingleGroupError
    """
    checked = validate_horizons(horizons)
    check_single_stratum(records)
    time, event, group = records_to_arrays(records)
    pair = resolve_groups(group)
    if majority_label not in pair:
        raise UnknownGroupError(majority_label, list(pair))
    minority_label = pair[1] if pair[0] == majority_label else pair[0]
    is_majority = group == majority_label

    points = []
    for horizon in checked:
        truncated_time = np.minimum(time, horizon)
        truncated_event = event & (time <= horizon)
        try:
            result = logrank_arrays(
                truncated_time,
                truncated_event,
                is_majority,
                majority_label=majority_label,
                minority_label=minority_label,
            )
        except NoEventsError:
            result = degenerate_result(int(time.size), majority_label, minority_label)

        band = SignificanceBand.INSUFFICIENT if result.degenerate else classify(result.p_value)
        points.append(TimelinePoint(horizon=horizon, result=result, band=band))
    return points


def first_significant_horizon(points: Sequence[TimelinePoint]) -> Optional[int]:
    """Минимальный горизонт с полосой significant, либо None"""
    significant = [p.horizon for p in points if p.band is SignificanceBand.SIGNIFICANT]
    return min(significant) if significant else None
