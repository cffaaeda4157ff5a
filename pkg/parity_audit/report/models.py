"""
Модель отчета аудита
"""

import hashlib
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from ..errors import InvariantViolationError, UnknownStratumError
from ..survival.models import LogRankResult, SignificanceBand, SurvivalCurve, TimelinePoint
from ..survival.timeline import classify

SCHEMA_VERSION = '1.0'

STATUS_TESTED = 'tested'
STATUS_SINGLE_GROUP = 'single_group'


@dataclass(frozen=True)
class ReportMetadata:
    dataset_id: str
    majority_label: str
    minority_label: str
    alpha: float
    tool_version: str
    quantizer: Dict[str, Any] = field(default_factory=dict)
    horizon_grid: Dict[str, Any] = field(default_factory=dict)
    mapping_preset: Optional[str] = None
    seed: Optional[int] = None
    rng_algorithm: Optional[str] = None


@dataclass(frozen=True)
class StratumBlock:
    """
    Результаты одной страты

    curves упорядочены: сначала большинство, затем меньшинство. Страта,
    где представлена одна группа, имеет status = single_group и не тестируется.
    """

    stratum: str
    status: str
    curves: Dict[str, SurvivalCurve]
    counts: Dict[str, int]
    pooled_curve: Optional[SurvivalCurve] = None
    result: Optional[LogRankResult] = None
    timeline: Tuple[TimelinePoint, ...] = ()

    def __post_init__(self):
        if self.status not in (STATUS_TESTED, STATUS_SINGLE_GROUP):
            raise InvariantViolationError(f"Unknown stratum status '{self.status}'", stratum=self.stratum)
        if self.status == STATUS_TESTED and self.result is None:
            raise InvariantViolationError("Tested stratum has no full-period result", stratum=self.stratum)

    @property
    def first_significant_horizon(self) -> Optional[int]:
        significant = [p.horizon for p in self.timeline if p.band is SignificanceBand.SIGNIFICANT]
        return min(significant) if significant else None

    @property
    def final_band(self) -> Optional[SignificanceBand]:
        """Полоса на последнем горизонте (или полного периода, если сетка пуста)"""
        if self.timeline:
            return self.timeline[-1].band
        if self.result is None:
            return None
        if self.result.degenerate:
            return SignificanceBand.INSUFFICIENT
        return classify(self.result.p_value)

    @property
    def n_subjects(self) -> int:
        return sum(self.counts.values())

    @property
    def is_degenerate(self) -> bool:
        return self.result is None or self.result.degenerate

    def parity_rejected(self, alpha: float) -> bool:
        """Отвергается ли паритет групп тестом за весь период на уровне alpha"""
        return not self.is_degenerate and self.result.p_value <= alpha


@dataclass(frozen=True)
class AuditReport:
    metadata: ReportMetadata
    strata: Tuple[StratumBlock, ...]

    def __post_init__(self):
        names = [b.stratum for b in self.strata]
        if len(set(names)) != len(names):
            raise InvariantViolationError(f"Strata appear more than once: {names}")

    @property
    def stratum_names(self):
        return [b.stratum for b in self.strata]

    def block(self, stratum: str) -> StratumBlock:
        for b in self.strata:
            if b.stratum == stratum:
                return b
        raise UnknownStratumError(stratum, self.stratum_names)

    @property
    def all_degenerate(self) -> bool:
        return all(b.is_degenerate for b in self.strata)


def safe_name(stratum: str) -> str:
    """
    Метка страты, пригодная для имени файла

    Если метку пришлось изменить, добавляется короткий хеш исходной метки:
    "a b" и "a_b" дают разные имена.
    """
    cleaned = re.sub(r'[^A-Za-z0-9_.-]', '_', stratum)
    if cleaned and cleaned == stratum:
        return cleaned
    digest = hashlib.sha1(stratum.encode('utf-8')).hexdigest()[:8]
    return f'{cleaned or "_"}-{digest}'
