"""
Предковое сэмплирование синтетических когорт

Каждая переменная графа берет случайные числа из собственного дочернего
потока SeedSequence, поэтому прогоны с одним seed выровнены по субъектам.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Union

import numpy as np

from ..errors import InvalidConfigError, UnknownGroupError
from ..helpers import simulation_logger
from ..ingest.records import write_normalized
from ..survival.models import EventRecord
from .models import DagConfig, SimulatedSubject

RNG_ALGORITHM = 'PCG64'

SeedLike = Union[int, np.random.SeedSequence]

# Дочерние потоки: U, D, M, tau, tau'
_STREAMS = ('context', 'group', 'decision', 'event', 'censor')


@dataclass(frozen=True)
class SimulatedArrays:
    """Векторное представление когорты; метки - индексы в списках DagConfig"""

    context: np.ndarray
    group: np.ndarray
    stratum: np.ndarray
    latent_event_time: np.ndarray
    latent_censor_time: np.ndarray
    time: np.ndarray
    event: np.ndarray

    def __len__(self) -> int:
        return int(self.time.size)


def _streams(seed: SeedLike) -> Dict[str, np.random.Generator]:
    sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return {
        name: np.random.Generator(np.random.PCG64(child))
        for name, child in zip(_STREAMS, sequence.spawn(len(_STREAMS)))
    }


def _categorical(uniform: np.ndarray, probabilities: np.ndarray) -> np.ndarray:
    """Обратная функция распределения; probabilities - строка на каждый субъект"""
    cdf = np.cumsum(probabilities, axis=-1)
    index = (uniform[:, None] >= cdf).sum(axis=1)
    return np.minimum(index, probabilities.shape[-1] - 1)


def _check_n(n: int, name: str = 'n') -> None:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidConfigError(name, f"must be a positive integer, got {n}")


def _tables(config: DagConfig) -> Dict[str, np.ndarray]:
    contexts, groups, strata = config.contexts, config.groups, config.strata
    return {
        'p_context': np.array([config.p_context[u] for u in contexts]),
        'group_given_context': np.array([
            [config.group_given_context[u][d] for d in groups] for u in contexts
        ]),
        # [группа, контекст, страта]
        'decision_given': np.array([
            [[config.decision_given[d][u][m] for m in strata] for u in contexts] for d in groups
        ]),
        'event_baseline': np.array([config.event_hazard.baseline[m] for m in strata]),
        'event_multiplier': np.array([config.event_hazard.multiplier(u) for u in contexts]),
        'censor_baseline': np.array([config.censor_hazard.baseline[m] for m in strata]),
        'censor_multiplier': np.array([config.censor_hazard.multiplier(u) for u in contexts]),
    }


def _finish(
    config: DagConfig,
    tables: Dict[str, np.ndarray],
    rng: Dict[str, np.random.Generator],
    context: np.ndarray,
    group: np.ndarray,
) -> SimulatedArrays:
    """Общий хвост графа: M из P(M|D,U), затем tau и tau'"""
    n = context.size
    stratum = _categorical(rng['decision'].random(n), tables['decision_given'][group, context])

    event_rate = tables['event_baseline'][stratum] * tables['event_multiplier'][context]
    censor_rate = tables['censor_baseline'][stratum] * tables['censor_multiplier'][context]
    latent_event = rng['event'].standard_exponential(n) / event_rate
    latent_censor = rng['censor'].standard_exponential(n) / censor_rate

    followup = config.followup_days
    observed = np.minimum(np.minimum(latent_event, latent_censor), followup)
    event = (latent_event <= latent_censor) & (latent_event <= followup)

    return SimulatedArrays(
        context=context,
        group=group,
        stratum=stratum,
        latent_event_time=latent_event,
        latent_censor_time=latent_censor,
        time=np.ceil(observed).astype(np.int64),
        event=event,
    )


def sample_observational(config: DagConfig, n: int, seed: SeedLike) -> SimulatedArrays:
    """U ~ P(U), D ~ P(D|U), далее общий хвост"""
    _check_n(n)
    tables = _tables(config)
    rng = _streams(seed)
    context = _categorical(rng['context'].random(n), np.broadcast_to(tables['p_context'], (n, len(config.contexts))))
    group = _categorical(rng['group'].random(n), tables['group_given_context'][context])
    return _finish(config, tables, rng, context, group)


def sample_groups(config: DagConfig, n_per_group: int, seed: SeedLike) -> SimulatedArrays:
    """
    Ровно n_per_group субъектов в каждой группе

    U берется из P(U | D=d), пропорционального P(U) P(D=d | U).
    """
    _check_n(n_per_group, 'n_per_group')
    tables = _tables(config)
    rng = _streams(seed)
    joint = tables['p_context'][:, None] * tables['group_given_context']
    n_groups = joint.shape[1]
    group = np.repeat(np.arange(n_groups), n_per_group)
    posterior = np.zeros((n_groups, joint.shape[0]))
    for d in range(n_groups):
        mass = joint[:, d].sum()
        if mass <= 0:
            raise InvalidConfigError('group_given_context', f"group '{config.groups[d]}' has zero probability")
        posterior[d] = joint[:, d] / mass
    context = _categorical(rng['context'].random(group.size), posterior[group])
    return _finish(config, tables, rng, context, group)


def sample_intervention(config: DagConfig, n: int, seed: SeedLike, group: str) -> SimulatedArrays:
    """do(D = group): U ~ P(U), D зафиксирована, M ~ P(M | D, U)"""
    _check_n(n)
    if group not in config.groups:
        raise UnknownGroupError(group, config.groups)
    tables = _tables(config)
    rng = _streams(seed)
    context = _categorical(rng['context'].random(n), np.broadcast_to(tables['p_context'], (n, len(config.contexts))))
    # поток D не используется, чтобы U, M, tau, tau' остались выровнены с simulate
    fixed = np.full(n, config.groups.index(group), dtype=np.int64)
    return _finish(config, tables, rng, context, fixed)


def to_subjects(config: DagConfig, arrays: SimulatedArrays) -> List[SimulatedSubject]:
    contexts, groups, strata = config.contexts, config.groups, config.strata
    return [
        SimulatedSubject(
            context=contexts[u],
            group=groups[d],
            stratum=strata[m],
            latent_event_time=float(tau),
            latent_censor_time=float(tau_c),
            observed=EventRecord(group=groups[d], stratum=strata[m], time=int(t), event=bool(e)),
        )
        for u, d, m, tau, tau_c, t, e in zip(
            arrays.context.tolist(),
            arrays.group.tolist(),
            arrays.stratum.tolist(),
            arrays.latent_event_time.tolist(),
            arrays.latent_censor_time.tolist(),
            arrays.time.tolist(),
            arrays.event.tolist(),
        )
    ]


def _log(config: DagConfig, arrays: SimulatedArrays, seed: SeedLike) -> None:
    simulation_logger.log_generated(
        n=len(arrays),
        seed=seed if isinstance(seed, int) else str(seed.entropy),
        hypothesis=config.hypothesis.value,
        n_events=int(arrays.event.sum()),
        rng_algorithm=RNG_ALGORITHM,
    )


def simulate(config: DagConfig, n: int, seed: int) -> List[SimulatedSubject]:
    """
    Синтетическая когорта из n субъектов

    Полностью детерминирована по (config, n, seed); латентные времена
    сохраняются для проверок.

    Raises:
        InvalidConfigError: n < 1

    Example:
        >>> subjects = simulate(load_dag_config('config/dag_h0.yml'), n=1000, seed=7)
        >>> subjects[0].observed
        EventRecord(group='majority', stratum='low', time=412, event=False)
    """
    arrays = sample_observational(config, n, seed)
    _log(config, arrays, seed)
    return to_subjects(config, arrays)


def simulate_groups(config: DagConfig, n_per_group: int, seed: int) -> List[SimulatedSubject]:
    """Когорта с ровно n_per_group субъектами в каждой группе"""
    arrays = sample_groups(config, n_per_group, seed)
    _log(config, arrays, seed)
    return to_subjects(config, arrays)


def simulate_intervention(config: DagConfig, n: int, seed: int, group: str) -> List[SimulatedSubject]:
    """Когорта под вмешательством do(D = group)"""
    arrays = sample_intervention(config, n, seed, group)
    _log(config, arrays, seed)
    return to_subjects(config, arrays)


def counterfactual_gap(
    config: DagConfig,
    n: int,
    seed: int,
    horizon_grid: Sequence[int],
) -> Dict[str, float]:
    """
    Эмпирическое расхождение интервенционных кривых по стратам

    Для каждой страты m - максимум по сетке горизонтов
    |P[tau > t | M=m] при do(большинство) - то же при do(меньшинство)|.
    Страты, пустые хотя бы при одном вмешательстве, пропускаются.
    """
    if not horizon_grid:
        return {}
    grid = np.asarray(sorted(horizon_grid), dtype=float)
    majority = sample_intervention(config, n, seed, config.majority_label)
    minority = sample_intervention(config, n, seed, config.minority_label)

    gaps: Dict[str, float] = {}
    for index, stratum in enumerate(config.strata):
        tau_maj = np.sort(majority.latent_event_time[majority.stratum == index])
        tau_min = np.sort(minority.latent_event_time[minority.stratum == index])
        if tau_maj.size == 0 or tau_min.size == 0:
            continue
        surv_maj = 1.0 - np.searchsorted(tau_maj, grid, side='right') / tau_maj.size
        surv_min = 1.0 - np.searchsorted(tau_min, grid, side='right') / tau_min.size
        gaps[stratum] = float(np.max(np.abs(surv_maj - surv_min)))
    return gaps


def export_normalized(subjects: Sequence[SimulatedSubject], path: Union[str, Path]) -> Path:
    """Сохраняет наблюдаемые записи в нормализованном формате когорты"""
    return write_normalized([s.observed for s in subjects], path)
