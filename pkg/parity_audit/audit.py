"""
Оркестрация конвейера: загрузка -> страты -> тесты -> отчет,
а также симуляция и калибровка
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import __version__
from .config import AuditConfig, resolve_output_dir
from .context import AuditContext, bind_context, generate_run_id
from .errors import IoFailureError, NoEventsError
from .helpers import cli_logger, log_execution_time, stratum_logger
from .ingest import CohortSummary, load_cohort, order_strata
from .report import (
    STATUS_SINGLE_GROUP,
    STATUS_TESTED,
    AuditReport,
    ReportMetadata,
    StratumBlock,
    emit_survival_csv,
    write_report,
    write_svg,
)
from .simulation import (
    RNG_ALGORITHM,
    CalibrationResult,
    Hypothesis,
    export_normalized,
    load_dag_config,
    power_estimate,
    simulate,
    simulate_groups,
    type1_rate,
)
from .survival import (
    EventRecord,
    kaplan_meier,
    logrank,
    pooled_curve,
    pvalue_timeline,
)
from .survival.timeline import classify, default_horizons, degenerate_result

EXIT_OK = 0
EXIT_DEGENERATE = 3

META_SUFFIX = '.meta.json'
CALIBRATION_FILE = 'calibration.json'


@dataclass
class AuditRun:
    """Итог прогона аудита"""

    report: AuditReport
    summary: CohortSummary
    run_dir: Path
    files: Dict[str, List[Path]] = field(default_factory=dict)
    exit_code: int = EXIT_OK


def new_run_dir(output_dir: Optional[Union[str, Path]], run_id: str) -> Path:
    """Каталог прогона <output_dir>/run-<run_id>; переменная окружения имеет приоритет"""
    return resolve_output_dir(output_dir) / f'run-{run_id}'


def group_by_stratum(records: Sequence[EventRecord]) -> Dict[str, List[EventRecord]]:
    strata: Dict[str, List[EventRecord]] = {}
    for r in records:
        strata.setdefault(r.stratum, []).append(r)
    return strata


def resolve_horizons(config: AuditConfig, records: Sequence[EventRecord]) -> List[int]:
    """Общая для всех страт сетка горизонтов; end по умолчанию - максимальное время когорты"""
    grid = config.horizons
    max_time = max(r.time for r in records)
    return default_horizons(max_time, start=grid.start, step=grid.step, end=grid.end)


def analyze_stratum(
    stratum: str,
    records: Sequence[EventRecord],
    majority_label: str,
    minority_label: str,
    horizons: Sequence[int],
    with_timeline: bool = True,
) -> StratumBlock:
    """
    Кривые, лог-ранк за весь период и временной ряд для одной страты

    Страта с одной группой не тестируется и получает status = single_group.
    """
    with AuditContext(stratum=stratum):
        by_group = {
            label: [r for r in records if r.group == label]
            for label in (majority_label, minority_label)
        }
        counts = {label: len(rows) for label, rows in by_group.items()}
        curves = {
            label: kaplan_meier(rows, f'{label}|{stratum}')
            for label, rows in by_group.items() if rows
        }
        pooled = pooled_curve(records)

        if len(curves) < 2:
            stratum_logger.log_skipped(stratum, 'single_group')
            return StratumBlock(
                stratum=stratum,
                status=STATUS_SINGLE_GROUP,
                curves=curves,
                counts=counts,
                pooled_curve=pooled,
            )

        try:
            result = logrank(records, majority_label)
        except NoEventsError:
            result = degenerate_result(len(records), majority_label, minority_label)

        if result.degenerate:
            stratum_logger.log_degenerate(stratum)
        else:
            stratum_logger.log_tested(
                stratum,
                chi_square=result.chi_square,
                p_value=result.p_value,
                band=classify(result.p_value).value,
                n_subjects=result.n_subjects,
                n_events=result.n_events_total,
            )

        timeline = tuple(pvalue_timeline(records, horizons, majority_label)) if with_timeline else ()
        block = StratumBlock(
            stratum=stratum,
            status=STATUS_TESTED,
            curves=curves,
            counts=counts,
            pooled_curve=pooled,
            result=result,
            timeline=timeline,
        )
        if with_timeline:
            stratum_logger.log_timeline(stratum, len(timeline), block.first_significant_horizon)
        return block


def read_sidecar(input_path: Union[str, Path]) -> Dict[str, object]:
    """Метаданные синтетической когорты (<файл>.meta.json), если есть"""
    path = Path(str(input_path) + META_SUFFIX)
    if not path.is_file():
        return {}
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def build_report(
    config: AuditConfig,
    records: Sequence[EventRecord],
    with_timeline: bool = True,
) -> AuditReport:
    """Строит отчет по всем стратам; порядок блоков не зависит от числа потоков"""
    mapping = config.mapping
    majority, minority = mapping.group_majority_value, mapping.group_minority_value
    horizons = resolve_horizons(config, records) if with_timeline else []
    strata = group_by_stratum(records)
    ordered = order_strata(strata, config.quantizer)

    analyze = bind_context(
        lambda name: analyze_stratum(name, strata[name], majority, minority, horizons, with_timeline)
    )
    if config.workers > 1 and len(ordered) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            blocks = list(executor.map(analyze, ordered))
    else:
        blocks = [analyze(name) for name in ordered]

    sidecar = read_sidecar(config.input_path)
    seed = config.seed if config.seed is not None else sidecar.get('seed')
    metadata = ReportMetadata(
        dataset_id=config.resolved_dataset_id,
        majority_label=majority,
        minority_label=minority,
        alpha=config.alpha,
        tool_version=__version__,
        quantizer=config.quantizer.describe(),
        horizon_grid={
            'start': config.horizons.start,
            'step': config.horizons.step,
            'end': config.horizons.end,
            'horizons': list(horizons),
        },
        mapping_preset=mapping.preset,
        seed=seed,
        rng_algorithm=sidecar.get('rng_algorithm'),
    )
    return AuditReport(metadata=metadata, strata=tuple(blocks))


@log_execution_time(cli_logger, 'audit')
def run_audit(config: AuditConfig, run_dir: Optional[Path] = None) -> AuditRun:
    """
    Полный аудит: загрузка когорты, тесты по стратам, запись отчета

    Returns:
        AuditRun: Отчет, сводка, записанные файлы и код выхода
            (3, если вырождены все страты)

    Raises:
        IngestError, ConfigError, StatisticsError, ReportError
    """
    run_dir = run_dir or new_run_dir(config.output_dir, generate_run_id())
    records, summary = load_cohort(
        config.input_path,
        config.mapping,
        config.quantizer,
        config.delimiter,
        config.drop_invalid_rows,
    )
    report = build_report(config, records)
    files = write_report(report, run_dir, show_pooled=config.show_pooled)
    exit_code = EXIT_DEGENERATE if report.all_degenerate else EXIT_OK
    return AuditRun(report=report, summary=summary, run_dir=run_dir, files=files, exit_code=exit_code)


@log_execution_time(cli_logger, 'curves')
def run_curves(config: AuditConfig, run_dir: Optional[Path] = None) -> AuditRun:
    """Только кривые выживаемости: CSV и SVG без временного ряда p-значений"""
    run_dir = run_dir or new_run_dir(config.output_dir, generate_run_id())
    records, summary = load_cohort(
        config.input_path, config.mapping, config.quantizer, config.delimiter, config.drop_invalid_rows,
    )
    report = build_report(config, records, with_timeline=False)
    files = {
        'csv': emit_survival_csv(report, run_dir),
        'svg': [
            write_svg(report, block.stratum, run_dir, show_pooled=config.show_pooled)
            for block in report.strata
        ],
    }
    return AuditRun(report=report, summary=summary, run_dir=run_dir, files=files)


def summary_lines(report: AuditReport) -> List[Tuple[str, Optional[str], str]]:
    """
    Строка сводки на страту: (страта, полоса на последнем горизонте, текст)
    """
    alpha = report.metadata.alpha
    lines = []
    for block in report.strata:
        if block.status == STATUS_SINGLE_GROUP:
            present = ', '.join(label for label, n in block.counts.items() if n)
            lines.append((block.stratum, None, f"{block.stratum}: single group ({present}), not tested"))
            continue
        band = block.final_band
        p = block.result.p_value
        horizon = block.timeline[-1].horizon if block.timeline else None
        text = (
            f"{block.stratum}: {band.value if band else 'n/a'}"
            + (f" at day {horizon}" if horizon is not None else "")
            + f"; full period p={p:.4g}"
            + (", degenerate" if block.result.degenerate else "")
            + ("; parity rejected" if block.parity_rejected(alpha) else "; parity not rejected")
            + f" at alpha={alpha:g}"
            + (f"; first significant at day {block.first_significant_horizon}"
               if block.first_significant_horizon is not None else "")
            + f" (n={block.n_subjects})"
        )
        lines.append((block.stratum, band.value if band else None, text))
    return lines


def write_json(data: dict, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            json.dump(data, f, indent=2, ensure_ascii=False)
            f.write('\n')
    except OSError as exc:
        raise IoFailureError(str(path), str(exc)) from exc
    return path


@log_execution_time(cli_logger, 'simulate')
def run_simulate(
    config_path: Union[str, Path],
    n: int,
    seed: int,
    output_path: Union[str, Path],
    per_group: bool = False,
) -> Tuple[Path, Path]:
    """
    Синтетическая когорта в нормализованном формате и файл метаданных рядом

    per_group: n - число субъектов в каждой группе, а не всего
    """
    dag = load_dag_config(config_path)
    subjects = simulate_groups(dag, n, seed) if per_group else simulate(dag, n, seed)
    cohort_path = export_normalized(subjects, output_path)
    meta_path = write_json(
        {
            'config': str(config_path),
            'hypothesis': dag.hypothesis.value,
            'n': n,
            'per_group': per_group,
            'seed': seed,
            'rng_algorithm': RNG_ALGORITHM,
            'groups': dag.groups,
            'tool_version': __version__,
        },
        Path(str(cohort_path) + META_SUFFIX),
    )
    return cohort_path, meta_path


@log_execution_time(cli_logger, 'calibrate')
def run_calibrate(
    config_path: Union[str, Path],
    replications: int,
    alpha: float,
    n_per_group: int = 500,
    seed: int = 0,
    stratum: Optional[str] = None,
    workers: int = 1,
    run_dir: Optional[Path] = None,
) -> CalibrationResult:
    """
    Калибровка по DagConfig: ошибка первого рода для H0, мощность для H1

    Raises:
        InvalidConfigError, UsageError
    """
    dag = load_dag_config(config_path)
    estimate = type1_rate if dag.hypothesis is Hypothesis.H0 else power_estimate
    result = estimate(dag, n_per_group, replications, alpha, seed, stratum=stratum, workers=workers)
    if run_dir is not None:
        write_json({'config': str(config_path), **result.to_dict()}, Path(run_dir) / CALIBRATION_FILE)
    return result
