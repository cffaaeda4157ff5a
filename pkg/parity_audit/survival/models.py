"""
Типы данных ядра анализа выживаемости

Все значения неизменяемы после создания и безопасно разделяются между потоками.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd


class SignificanceBand(str, Enum):
    """Полосы значимости: границы ровно 0.05 и 0.1, верхняя граница включена"""

    INSUFFICIENT = "insufficient"   # p > 0.1
    MARGINAL = "marginal"           # 0.05 < p <= 0.1
    SIGNIFICANT = "significant"     # p <= 0.05


@dataclass(frozen=True)
class EventRecord:
    """
    Наблюдение одного субъекта

    Attributes:
        group: Метка группы (одна из двух объявленных)
        stratum: Метка страты решения (полоса или сырой балл)
        time: Наблюдаемое время в целых днях с момента освобождения
        event: True - целевое событие наблюдалось, False - цензурирование
    """

    group: str
    stratum: str
    time: int
    event: bool

    def __post_init__(self):
        if isinstance(self.time, bool) or not isinstance(self.time, (int, np.integer)):
            raise ValueError(f"time must be an integer number of days, got {self.time!r}")
        if self.time < 0:
            raise ValueError(f"time must be non-negative, got {self.time}")
        object.__setattr__(self, 'time', int(self.time))
        object.__setattr__(self, 'event', bool(self.event))


@dataclass(frozen=True)
class RiskTableRow:
    """Одна строка таблицы риска: величины N, O, E в момент события"""

    time: int
    n_at_risk_by_group: Dict[str, int]
    events_by_group: Dict[str, int]
    n_at_risk_total: int
    events_total: int
    expected_by_group: Dict[str, float]


@dataclass(frozen=True, eq=False)
class RiskTable:
    """
    Таблица риска одной страты в столбцовом виде

    Строки упорядочены строго по возрастанию времени; присутствуют только
    моменты хотя бы с одним событием. Столбец g массивов соответствует groups[g].
    """

    groups: Tuple[str, str]
    times: np.ndarray            # (k,) int64
    n_at_risk: np.ndarray        # (k, 2) int64
    events: np.ndarray           # (k, 2) int64

    def __len__(self) -> int:
        return int(self.times.shape[0])

    @property
    def n_at_risk_total(self) -> np.ndarray:
        return self.n_at_risk.sum(axis=1)

    @property
    def events_total(self) -> np.ndarray:
        return self.events.sum(axis=1)

    @property
    def expected(self) -> np.ndarray:
        """E_{d,t} = O_t * N_{d,t} / N_t"""
        if len(self) == 0:
            return np.zeros((0, 2), dtype=float)
        totals = self.n_at_risk_total.astype(float)
        return self.events_total.astype(float)[:, None] * self.n_at_risk / totals[:, None]

    @property
    def rows(self) -> List[RiskTableRow]:
        return list(self.iter_rows())

    def iter_rows(self) -> Iterator[RiskTableRow]:
        expected = self.expected
        g0, g1 = self.groups
        for k in range(len(self)):
            yield RiskTableRow(
                time=int(self.times[k]),
                n_at_risk_by_group={g0: int(self.n_at_risk[k, 0]), g1: int(self.n_at_risk[k, 1])},
                events_by_group={g0: int(self.events[k, 0]), g1: int(self.events[k, 1])},
                n_at_risk_total=int(self.n_at_risk[k].sum()),
                events_total=int(self.events[k].sum()),
                expected_by_group={g0: float(expected[k, 0]), g1: float(expected[k, 1])},
            )

    def to_frame(self) -> pd.DataFrame:
        """Представление таблицы в виде DataFrame (одна строка на момент события)"""
        g0, g1 = self.groups
        expected = self.expected
        return pd.DataFrame({
            'time': self.times,
            f'n_at_risk_{g0}': self.n_at_risk[:, 0],
            f'n_at_risk_{g1}': self.n_at_risk[:, 1],
            f'events_{g0}': self.events[:, 0],
            f'events_{g1}': self.events[:, 1],
            'n_at_risk_total': self.n_at_risk_total,
            'events_total': self.events_total,
            f'expected_{g0}': expected[:, 0],
            f'expected_{g1}': expected[:, 1],
        })


@dataclass(frozen=True)
class SurvivalStep:
    time: int
    survival: float
    n_at_risk: int
    n_events: int


@dataclass(frozen=True)
class SurvivalCurve:
    """
    Ступенчатая оценка S(t) для группы внутри страты

    Первая ступень - (0, 1.0, n, 0); далее по ступени на каждое различное
    наблюдаемое время. Если события есть уже в день 0, они входят в первую
    ступень и S(0) < 1; до нуля S = 1. Времена ступеней строго растут,
    кривая падает только там, где n_events >= 1.
    """

    label: str
    steps: Tuple[SurvivalStep, ...]

    def survival_at(self, t: float) -> float:
        """Значение S(t), непрерывное справа"""
        value = 1.0
        for step in self.steps:
            if step.time > t:
                break
            value = step.survival
        return value

    def median_time(self) -> Optional[int]:
        """Первый момент, где S(t) <= 0.5, либо None"""
        for step in self.steps:
            if step.survival <= 0.5:
                return step.time
        return None

    @property
    def n_subjects(self) -> int:
        return self.steps[0].n_at_risk if self.steps else 0


@dataclass(frozen=True)
class LogRankResult:
    """
    Результат лог-ранк теста для одной страты

    При нулевой дисперсии результат помечается degenerate, chi_square = 0
    и p_value = 1.0.
    """

    chi_square: float
    variance: float
    p_value: float
    observed_majority: int
    expected_majority: float
    observed_minority: int
    expected_minority: float
    n_events_total: int
    n_subjects: int
    majority_label: str
    minority_label: str
    degenerate: bool = False
    dof: int = field(default=1)

    def __post_init__(self):
        if self.dof != 1:
            raise ValueError("log-rank comparison of two groups has exactly one degree of freedom")
        if not (self.chi_square >= 0 and math.isfinite(self.chi_square)):
            raise ValueError(f"chi_square must be finite and non-negative, got {self.chi_square}")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value must lie in [0, 1], got {self.p_value}")

    @property
    def excess_group(self) -> Optional[str]:
        """Группа, у которой наблюдаемых событий больше ожидаемых"""
        diff = self.observed_majority - self.expected_majority
        if diff > 0:
            return self.majority_label
        if diff < 0:
            return self.minority_label
        return None


@dataclass(frozen=True)
class TimelinePoint:
    horizon: int
    result: LogRankResult
    band: SignificanceBand
