"""
Калибровка теста на синтетических когортах: ошибка первого рода и мощность
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from ..context import bind_context
from ..errors import (
    InvalidConfigError,
    NoEventsError,
    SingleGroupError,
    UnknownStratumError,
    UsageError,
    WrongHypothesisError,
)
from ..helpers import simulation_logger
from ..survival.logrank import logrank_arrays
from .models import DagConfig, Hypothesis
from .sampler import RNG_ALGORITHM, sample_groups

MIN_REPLICATIONS = 100
CONFIDENCE_LEVEL = 0.95


@dataclass(frozen=True)
class CalibrationResult:
    """
    Итог калибровки

    Одно испытание - одна пара (репликация, страта) с хотя бы одним событием
    и обеими группами; rejection_rate = n_rejections / n_tests.
    """

    kind: str
    rejection_rate: float
    ci_low: float
    ci_high: float
    n_tests: int
    n_rejections: int
    replications: int
    alpha: float
    n_per_group: int
    seed: int
    hypothesis: str
    rng_algorithm: str = RNG_ALGORITHM
    stratum: Optional[str] = None
    per_stratum_rates: Dict[str, float] = field(default_factory=dict)

    @property
    def confidence_interval(self) -> Tuple[float, float]:
        return self.ci_low, self.ci_high

    def __iter__(self):
        # распаковка (rate, (low, high))
        return iter((self.rejection_rate, self.confidence_interval))

    def to_dict(self) -> dict:
        return asdict(self)


def wilson_interval(successes: int, trials: int, confidence: float = CONFIDENCE_LEVEL) -> Tuple[float, float]:
    """Биномиальный интервал Уилсона"""
    ci = stats.binomtest(successes, trials).proportion_ci(confidence_level=confidence, method='wilson')
    return float(ci.low), float(ci.high)


def _replicate(
    config: DagConfig,
    n_per_group: int,
    seed: int,
    replication: int,
    alpha: float,
    strata: List[int],
) -> Dict[int, Optional[bool]]:
    """Одна репликация: решение теста по каждой страте, None - страта не тестируема"""
    arrays = sample_groups(config, n_per_group, np.random.SeedSequence([seed, replication]))
    is_majority = arrays.group == 0
    decisions: Dict[int, Optional[bool]] = {}
    for index in strata:
        mask = arrays.stratum == index
        try:
            result = logrank_arrays(arrays.time[mask], arrays.event[mask], is_majority[mask])
        except (SingleGroupError, NoEventsError):
            decisions[index] = None
            continue
        # при alpha = 0 тест никогда не отвергает гипотезу
        decisions[index] = alpha > 0 and result.p_value <= alpha
    return decisions


def _validate(replications: int, alpha: float, n_per_group: int) -> None:
    if isinstance(replications, bool) or int(replications) != replications or replications < MIN_REPLICATIONS:
        raise UsageError(
            f"replications must be an integer of at least {MIN_REPLICATIONS}, got {replications}",
            replications=replications,
        )
    if not 0.0 <= alpha <= 1.0:
        raise InvalidConfigError('alpha', f"must lie in [0, 1], got {alpha}")
    if n_per_group < 2:
        raise InvalidConfigError('n_per_group', f"must be at least 2, got {n_per_group}")


def calibrate(
    config: DagConfig,
    kind: str,
    n_per_group: int,
    replications: int,
    alpha: float,
    seed: int,
    stratum: Optional[str] = None,
    workers: int = 1,
) -> CalibrationResult:
    """
    Доля отвержений лог-ранк теста по репликациям

    Подзерна репликаций - SeedSequence([seed, индекс]); итог не зависит
    от порядка выполнения и числа потоков.

    Raises:
        UsageError: replications < 100
        UnknownStratumError: Страта не объявлена в конфигурации
        NoEventsError: Ни одна пара (репликация, страта) не тестируема
    """
    _validate(replications, alpha, n_per_group)
    if stratum is not None and stratum not in config.strata:
        raise UnknownStratumError(stratum, config.strata)
    strata = [config.strata.index(stratum)] if stratum is not None else list(range(len(config.strata)))

    started = time.perf_counter()
    replicate = bind_context(
        lambda rep: _replicate(config, n_per_group, seed, rep, alpha, strata)
    )
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(replicate, range(replications)))
    else:
        outcomes = [replicate(rep) for rep in range(replications)]

    tests = {index: 0 for index in strata}
    rejections = {index: 0 for index in strata}
    for decisions in outcomes:
        for index, rejected in decisions.items():
            if rejected is None:
                continue
            tests[index] += 1
            rejections[index] += int(rejected)

    n_tests = sum(tests.values())
    n_rejections = sum(rejections.values())
    if n_tests == 0:
        raise NoEventsError()
    ci_low, ci_high = wilson_interval(n_rejections, n_tests)

    result = CalibrationResult(
        kind=kind,
        rejection_rate=n_rejections / n_tests,
        ci_low=ci_low,
        ci_high=ci_high,
        n_tests=n_tests,
        n_rejections=n_rejections,
        replications=int(replications),
        alpha=float(alpha),
        n_per_group=int(n_per_group),
        seed=int(seed),
        hypothesis=config.hypothesis.value,
        stratum=stratum,
        per_stratum_rates={
            config.strata[index]: rejections[index] / tests[index]
            for index in strata if tests[index]
        },
    )
    simulation_logger.log_calibration(
        kind=kind,
        rejection_rate=result.rejection_rate,
        ci_low=ci_low,
        ci_high=ci_high,
        replications=result.replications,
        alpha=result.alpha,
        duration_ms=(time.perf_counter() - started) * 1000,
    )
    return result


def type1_rate(
    config: DagConfig,
    n_per_group: int,
    replications: int,
    alpha: float,
    seed: int,
    stratum: Optional[str] = None,
    workers: int = 1,
) -> CalibrationResult:
    """
    Эмпирическая ошибка первого рода на конфигурации H0

    Результат распаковывается как (rate, (low, high)).

    Raises:
        WrongHypothesisError: Конфигурация помечена H1
    """
    if config.hypothesis is not Hypothesis.H0:
        raise WrongHypothesisError(Hypothesis.H0.value, config.hypothesis.value)
    return calibrate(config, 'type1', n_per_group, replications, alpha, seed, stratum, workers)


def power_estimate(
    config: DagConfig,
    n_per_group: int,
    replications: int,
    alpha: float,
    seed: int,
    stratum: Optional[str] = None,
    workers: int = 1,
) -> CalibrationResult:
    """
    Эмпирическая мощность на конфигурации H1

    Raises:
        WrongHypothesisError: Конфигурация помечена H0
    """
    if config.hypothesis is not Hypothesis.H1:
        raise WrongHypothesisError(Hypothesis.H1.value, config.hypothesis.value)
    return calibrate(config, 'power', n_per_group, replications, alpha, seed, stratum, workers)
