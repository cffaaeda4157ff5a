"""
Построение таблицы риска (величины N, O, E) для одной страты

Соглашение о совпадениях: события обрабатываются раньше цензурирований,
т.е. субъект, цензурированный в момент t, входит в множество риска в t
(N_{d,t} = |{i : T_i >= t}|).
"""

from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from ..errors import (
    EmptyCohortError,
    MixedStrataError,
    SingleGroupError,
    TooManyGroupsError,
    UnknownGroupError,
)
from .models import EventRecord, RiskTable


def records_to_arrays(records: Sequence[EventRecord]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Раскладывает записи на массивы (time, event, group)"""
    time = np.fromiter((r.time for r in records), dtype=np.int64, count=len(records))
    event = np.fromiter((r.event for r in records), dtype=bool, count=len(records))
    group = np.array([r.group for r in records], dtype=object)
    return time, event, group


def check_single_stratum(records: Sequence[EventRecord]) -> str:
    """Проверяет, что записи непусты и принадлежат одной страте"""
    if not records:
        raise EmptyCohortError()
    strata = sorted({r.stratum for r in records})
    if len(strata) > 1:
        raise MixedStrataError(strata)
    return strata[0]


def resolve_groups(
    labels_present: Iterable[str],
    groups: Optional[Sequence[str]] = None,
) -> Tuple[str, str]:
    """
    Определяет пару сравниваемых групп

    Args:
        labels_present: Метки, встречающиеся в записях
        groups: Явно объявленная пара меток; по умолчанию - отсортированные метки из данных

    Returns:
        Tuple[str, str]: Пара меток; порядок задает столбцы таблицы риска
    """
    present = sorted(set(labels_present))
    if groups is None:
        if len(present) < 2:
            raise SingleGroupError(present)
        if len(present) > 2:
            raise TooManyGroupsError(present)
        return present[0], present[1]

    declared = list(groups)
    if len(set(declared)) < 2:
        raise SingleGroupError(declared)
    if len(declared) > 2:
        raise TooManyGroupsError(declared)
    for label in present:
        if label not in declared:
            raise UnknownGroupError(label, declared)
    return declared[0], declared[1]


def _count_at_least(sorted_values: np.ndarray, points: np.ndarray) -> np.ndarray:
    """|{v : v >= t}| для каждого t из points"""
    return sorted_values.shape[0] - np.searchsorted(sorted_values, points, side='left')


def _count_equal(sorted_values: np.ndarray, points: np.ndarray) -> np.ndarray:
    return (
        np.searchsorted(sorted_values, points, side='right')
        - np.searchsorted(sorted_values, points, side='left')
    )


def risk_counts(
    time: np.ndarray,
    event: np.ndarray,
    in_second_group: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Векторизованный подсчет множеств риска

    Args:
        time: Наблюдаемые времена (целые дни)
        event: Индикатор события
        in_second_group: True для субъектов второй группы

    Returns:
        (times, n_at_risk, events): моменты событий по возрастанию и массивы (k, 2)
    """
    time = np.asarray(time)
    event = np.asarray(event, dtype=bool)
    second = np.asarray(in_second_group, dtype=bool)

    event_times = np.unique(time[event])
    if event_times.size == 0:
        empty = np.zeros((0, 2), dtype=np.int64)
        return event_times.astype(np.int64), empty, empty.copy()

    n_at_risk = np.empty((event_times.size, 2), dtype=np.int64)
    events = np.empty((event_times.size, 2), dtype=np.int64)
    for column, mask in enumerate((~second, second)):
        n_at_risk[:, column] = _count_at_least(np.sort(time[mask]), event_times)
        events[:, column] = _count_equal(np.sort(time[mask & event]), event_times)

    return event_times.astype(np.int64), n_at_risk, events


def build_risk_table(
    records: Sequence[EventRecord],
    groups: Optional[Sequence[str]] = None,
) -> RiskTable:
    """
    Строит таблицу риска для записей одной страты

    Args:
        records: Записи одной страты
        groups: Объявленная пара групп; по умолчанию - две метки из данных

    Returns:
        RiskTable: По строке на каждый момент хотя бы с одним событием

    Raises:
        EmptyCohortError: Записей нет
        MixedStrataError: Записи из разных страт
        SingleGroupError: Объявлено меньше двух групп

    Example:
        >>> table = build_risk_table([
        ...     EventRecord('A', 'low', 1, True),
        ...     EventRecord('B', 'low', 1, True),
        ... ])
        >>> table.rows[0].expected_by_group['A']
        1.0
    """
    check_single_stratum(records)
    time, event, group = records_to_arrays(records)
    pair = resolve_groups(group, groups)

    times, n_at_risk, events = risk_counts(time, event, group == pair[1])
    return RiskTable(groups=pair, times=times, n_at_risk=n_at_risk, events=events)
