"""
Оценка Каплана-Мейера (product-limit) при правом цензурировании
"""

from typing import Optional, Sequence

import numpy as np

from ..errors import EmptyCohortError
from .models import EventRecord, SurvivalCurve, SurvivalStep


def kaplan_meier_arrays(time: np.ndarray, event: np.ndarray, label: str) -> SurvivalCurve:
    """
    S(t) = prod_{t_i <= t} (1 - O_{t_i} / N_{t_i})

    Ступень на каждое различное наблюдаемое время; цензурирования в момент t
    входят в N_t (события раньше цензурирований).
    """
    time = np.asarray(time, dtype=np.int64)
    event = np.asarray(event, dtype=bool)
    if time.size == 0:
        raise EmptyCohortError()

    sorted_time = np.sort(time)
    distinct = np.unique(sorted_time)
    n_at_risk = sorted_time.size - np.searchsorted(sorted_time, distinct, side='left')
    event_time = np.sort(time[event])
    n_events = (
        np.searchsorted(event_time, distinct, side='right')
        - np.searchsorted(event_time, distinct, side='left')
    )
    survival = np.cumprod(1.0 - n_events / n_at_risk)

    # события дня 0 входят в начальную ступень: времена ступеней строго растут
    steps = [] if distinct[0] == 0 else [
        SurvivalStep(time=0, survival=1.0, n_at_risk=int(time.size), n_events=0)
    ]
    steps.extend(
        SurvivalStep(
            time=int(t),
            survival=float(s),
            n_at_risk=int(n),
            n_events=int(d),
        )
        for t, s, n, d in zip(distinct, survival, n_at_risk, n_events)
    )
    return SurvivalCurve(label=label, steps=tuple(steps))


def kaplan_meier(records: Sequence[EventRecord], label: Optional[str] = None) -> SurvivalCurve:
    """
    Строит кривую Каплана-Мейера для записей одной группы внутри страты

    Args:
        records: Записи группы
        label: Идентификатор кривой; по умолчанию 'группа|страта' первой записи

    Raises:
        EmptyCohortError: Записей нет

    Example:
        >>> curve = kaplan_meier([EventRecord('A', 'low', 1, True), EventRecord('A', 'low', 2, False)])
        >>> curve.survival_at(5)
        0.5
    """
    if not records:
        raise EmptyCohortError()
    if label is None:
        label = f"{records[0].group}|{records[0].stratum}"
    time = np.fromiter((r.time for r in records), dtype=np.int64, count=len(records))
    event = np.fromiter((r.event for r in records), dtype=bool, count=len(records))
    return kaplan_meier_arrays(time, event, label)


def pooled_curve(records: Sequence[EventRecord], label: Optional[str] = None) -> SurvivalCurve:
    """
    Кривая обеих групп вместе - общая оценка S(t|m) при нулевой гипотезе
    """
    if not records:
        raise EmptyCohortError()
    return kaplan_meier(records, label or f"pooled|{records[0].stratum}")
