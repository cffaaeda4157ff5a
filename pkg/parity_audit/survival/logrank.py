"""
Лог-ранк тест двух групп внутри страты и хвост распределения хи-квадрат
"""

import math
from numbers import Real
from typing import Sequence

import numpy as np
from scipy import special

from ..errors import NegativeStatisticError, NoEventsError, SingleGroupError, UnknownGroupError
from .models import EventRecord, LogRankResult
from .risk_table import check_single_stratum, records_to_arrays, resolve_groups, risk_counts


def chi_square_sf(x: float, dof: int = 1) -> float:
    """
    Верхний хвост распределения хи-квадрат, P(X >= x)

    Для одной степени свободы равен erfc(sqrt(x / 2)); в общем случае -
    регуляризованная верхняя неполная гамма-функция Q(dof/2, x/2).

    Raises:
        NegativeStatisticError: x < 0 или не число
    """
    if not isinstance(x, Real) or math.isnan(x) or x < 0:
        raise NegativeStatisticError(x)
    if int(dof) != dof or dof < 1:
        raise ValueError(f"dof must be a positive integer, got {dof}")
    if math.isinf(x):
        return 0.0
    if dof == 1:
        return float(special.erfc(math.sqrt(x / 2.0)))
    return float(special.gammaincc(dof / 2.0, x / 2.0))


def logrank_arrays(
    time: np.ndarray,
    event: np.ndarray,
    is_majority: np.ndarray,
    majority_label: str = 'majority',
    minority_label: str = 'minority',
) -> LogRankResult:
    """
    Векторизованное ядро лог-ранк теста

    chi^2 = (O_maj - E_maj)^2 / Var, где
    Var = sum_t N_maj N_min O_t (N_t - O_t) / (N_t^2 (N_t - 1));
    моменты с N_t = 1 дают нулевой вклад в дисперсию.

    Args:
        time: Наблюдаемые времена (целые дни)
        event: Индикатор события
        is_majority: True для субъектов группы большинства

    Raises:
        SingleGroupError: Одна из групп пуста
        NoEventsError: В объединенной когорте нет событий
    """
    time = np.asarray(time, dtype=np.int64)
    event = np.asarray(event, dtype=bool)
    is_majority = np.asarray(is_majority, dtype=bool)

    n_majority = int(is_majority.sum())
    if n_majority == 0 or n_majority == is_majority.size:
        present = [majority_label] if n_majority else ([minority_label] if is_majority.size else [])
        raise SingleGroupError(present)
    if not event.any():
        raise NoEventsError()

    _, n_at_risk, events = risk_counts(time, event, ~is_majority)
    n_maj = n_at_risk[:, 0].astype(float)
    n_min = n_at_risk[:, 1].astype(float)
    o_maj = events[:, 0].astype(float)
    o_min = events[:, 1].astype(float)
    n_total = n_maj + n_min
    o_total = o_maj + o_min

    # O_maj,t - E_maj,t = (O_maj N_min - O_min N_maj) / N_t: антисимметрично по меткам групп
    score = float(np.sum((o_maj * n_min - o_min * n_maj) / n_total))

    multi = n_total > 1
    variance = float(np.sum(
        n_maj[multi] * n_min[multi] * o_total[multi] * (n_total[multi] - o_total[multi])
        / (n_total[multi] * n_total[multi] * (n_total[multi] - 1.0))
    ))

    expected_majority = float(np.sum(o_total * n_maj / n_total))
    expected_minority = float(np.sum(o_total * n_min / n_total))
    observed_majority = int(events[:, 0].sum())
    observed_minority = int(events[:, 1].sum())

    degenerate = not variance > 0.0
    if degenerate:
        chi_square, p_value = 0.0, 1.0
    else:
        chi_square = score * score / variance
        p_value = chi_square_sf(chi_square, 1)

    return LogRankResult(
        chi_square=chi_square,
        variance=variance if variance > 0.0 else 0.0,
        p_value=p_value,
        observed_majority=observed_majority,
        expected_majority=expected_majority,
        observed_minority=observed_minority,
        expected_minority=expected_minority,
        n_events_total=observed_majority + observed_minority,
        n_subjects=int(time.size),
        majority_label=majority_label,
        minority_label=minority_label,
        degenerate=degenerate,
    )


def logrank(records: Sequence[EventRecord], majority_label: str) -> LogRankResult:
    """
    Лог-ранк тест для записей одной страты

    Args:
        records: Записи одной страты, ровно две метки группы
        majority_label: Метка группы большинства; вторая метка - меньшинство

    Returns:
        LogRankResult: При нулевой дисперсии помечен degenerate, p_value = 1.0

    Raises:
        SingleGroupError, NoEventsError, EmptyCohortError, MixedStrataError

    Example:
        >>> result = logrank(records, majority_label='Caucasian')
        >>> result.p_value
        0.0132...
    """
    check_single_stratum(records)
    time, event, group = records_to_arrays(records)
    pair = resolve_groups(group)
    if majority_label not in pair:
        raise UnknownGroupError(majority_label, list(pair))
    minority_label = pair[1] if pair[0] == majority_label else pair[0]

    return logrank_arrays(
        time,
        event,
        group == majority_label,
        majority_label=majority_label,
        minority_label=minority_label,
    )
