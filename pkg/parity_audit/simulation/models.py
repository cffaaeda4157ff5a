"""
Структурная модель для синтетических когорт

Граф: U -> D (ассоциативная связь), (D, U) -> M, M -> (tau, tau'),
и только при H1 дополнительно U -> tau, U -> tau'. Прямой связи D -> tau
в модели нет: поля для нее не существует.
"""

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Union

from pydantic import Field, field_validator, model_validator

from ..config import FrozenConfigModel, build_model, load_yaml
from ..survival.models import EventRecord

PROBABILITY_TOLERANCE = 1e-12


class Hypothesis(str, Enum):
    H0 = "H0"
    H1 = "H1"


def _check_distribution(name: str, table: Dict[str, float]) -> None:
    if not table:
        raise ValueError(f"{name} is empty")
    for key, p in table.items():
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name}[{key}] = {p} is not a probability")
    total = math.fsum(table.values())
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        raise ValueError(f"{name} sums to {total}, expected 1")


class HazardSpec(FrozenConfigModel):
    """
    Интенсивность экспоненциального времени ожидания

    rate(m, u) = baseline[m] * context_multiplier[u]; множитель
    отсутствующего контекста равен 1.
    """

    baseline: Dict[str, float]
    context_multiplier: Dict[str, float] = Field(default_factory=dict)

    @field_validator('baseline', 'context_multiplier')
    @classmethod
    def _positive(cls, table: Dict[str, float]) -> Dict[str, float]:
        for key, value in table.items():
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"rate for '{key}' must be positive and finite, got {value}")
        return table

    def multiplier(self, context: str) -> float:
        return self.context_multiplier.get(context, 1.0)

    def is_context_free(self) -> bool:
        return all(value == 1.0 for value in self.context_multiplier.values())


class DagConfig(FrozenConfigModel):
    """
    Параметры генератора

    Порядок контекстов задают ключи p_context, порядок групп - ключи
    group_given_context (первая - большинство), порядок страт - ключи
    event_hazard.baseline.
    """

    p_context: Dict[str, float]
    group_given_context: Dict[str, Dict[str, float]]
    decision_given: Dict[str, Dict[str, Dict[str, float]]]
    event_hazard: HazardSpec
    censor_hazard: HazardSpec
    followup_days: float = 730
    hypothesis: Hypothesis = Hypothesis.H0

    @field_validator('followup_days')
    @classmethod
    def _followup(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("followup_days must be positive")
        if math.isfinite(value) and not float(value).is_integer():
            raise ValueError("followup_days must be a whole number of days or infinite")
        return value

    @property
    def contexts(self) -> List[str]:
        return list(self.p_context)

    @property
    def groups(self) -> List[str]:
        return list(next(iter(self.group_given_context.values())))

    @property
    def majority_label(self) -> str:
        return self.groups[0]

    @property
    def minority_label(self) -> str:
        return self.groups[1]

    @property
    def strata(self) -> List[str]:
        return list(self.event_hazard.baseline)

    @model_validator(mode='after')
    def _check_tables(self):
        _check_distribution('p_context', self.p_context)
        contexts = set(self.p_context)

        if set(self.group_given_context) != contexts:
            raise ValueError("group_given_context must have a row for every context")
        groups = self.groups
        if len(groups) != 2:
            raise ValueError(f"exactly two groups are required, got {groups}")
        for u, row in self.group_given_context.items():
            if list(row) != groups:
                raise ValueError(f"group_given_context[{u}] must list groups {groups} in order")
            _check_distribution(f'group_given_context[{u}]', row)

        strata = set(self.event_hazard.baseline)
        if set(self.censor_hazard.baseline) != strata:
            raise ValueError("censor_hazard.baseline must cover the same strata as event_hazard.baseline")
        if set(self.decision_given) != set(groups):
            raise ValueError("decision_given must have a table for every group")
        for d, by_context in self.decision_given.items():
            if set(by_context) != contexts:
                raise ValueError(f"decision_given[{d}] must have a row for every context")
            for u, row in by_context.items():
                if set(row) != strata:
                    raise ValueError(f"decision_given[{d}][{u}] must cover strata {sorted(strata)}")
                _check_distribution(f'decision_given[{d}][{u}]', row)

        for name, spec in (('event_hazard', self.event_hazard), ('censor_hazard', self.censor_hazard)):
            unknown = set(spec.context_multiplier) - contexts
            if unknown:
                raise ValueError(f"{name}.context_multiplier names unknown contexts {sorted(unknown)}")
            if self.hypothesis is Hypothesis.H0 and not spec.is_context_free():
                raise ValueError(f"{name}.context_multiplier must be 1 for every context under H0")
        return self


def load_dag_config(path: Union[str, Path]) -> DagConfig:
    """
    Загружает DagConfig из YAML

    Raises:
        InvalidConfigError: Нарушен инвариант конфигурации (с именем поля)
    """
    data = load_yaml(path)
    data.pop('notes', None)
    return build_model(DagConfig, data, str(path))


@dataclass(frozen=True)
class SimulatedSubject:
    """
    Субъект с латентными временами

    observed.time = ceil(min(tau, tau', followup)) в целых днях,
    observed.event = tau <= tau' и tau <= followup.
    """

    context: str
    group: str
    stratum: str
    latent_event_time: float
    latent_censor_time: float
    observed: EventRecord
