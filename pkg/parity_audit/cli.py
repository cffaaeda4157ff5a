"""
Командная строка: audit, simulate, calibrate, curves

Коды выхода: 0 - успех, 2 - ошибка входа или конфигурации,
3 - вырождены все страты / статистическая ошибка, 4 - внутренняя ошибка.
"""

import argparse
import sys
from typing import Any, Dict, List, Optional

from colorama import Fore, Style, just_fix_windows_console

from . import __version__
from .audit import run_audit, run_calibrate, run_curves, run_simulate, summary_lines
from .config import (
    AuditConfig,
    ColumnMapping,
    build_model,
    load_mapping,
    load_yaml,
    resolve_output_dir,
)
from .context import AuditContext, generate_run_id
from .errors import ParityAuditError, UsageError
from .helpers import LogEvent, cli_logger
from .ingest import is_normalized_file
from .logging_config import setup_logging

EXIT_INTERNAL = 4

BAND_STYLES = {
    'significant': Fore.RED + Style.BRIGHT,
    'marginal': Fore.YELLOW,
    'insufficient': Fore.GREEN,
    None: Fore.CYAN,
}


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(',') if part.strip()]


def _add_audit_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--input', dest='input_path', help='cohort file (delimited text with header)')
    parser.add_argument('--config', help='YAML file with AuditConfig fields; flags override it')
    parser.add_argument('--mapping', help='preset name or YAML column mapping')
    parser.add_argument('--score-column', help='re-point the score column (e.g. v_decile_score)')
    parser.add_argument('--quantizer', choices=['banded', 'raw'], help='score to stratum mode')
    parser.add_argument('--band-edges', type=_int_list, help='band cut points, e.g. 5,8')
    parser.add_argument('--band-labels', type=_str_list, help='band labels, e.g. low,medium,high')
    parser.add_argument('--score-min', type=int)
    parser.add_argument('--score-max', type=int)
    parser.add_argument(
        '--alpha', type=float,
        help='significance level of the full-period parity decision (default 0.05); '
             'timeline bands stay at 0.05 / 0.1',
    )
    parser.add_argument('--horizon-start', type=int)
    parser.add_argument('--horizon-step', type=int)
    parser.add_argument('--horizon-end', type=int)
    parser.add_argument('--output-dir')
    parser.add_argument('--seed', type=int)
    parser.add_argument('--delimiter')
    parser.add_argument('--dataset-id')
    parser.add_argument('--workers', type=int)
    parser.add_argument(
        '--show-pooled', action='store_true', default=None,
        help='overlay the pooled curve of both groups on the survival plots',
    )
    parser.add_argument(
        '--drop-invalid-rows', action='store_true', default=None,
        help='drop and count rows with malformed values instead of failing',
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='parity-audit',
        description='Counterfactual group parity audit of time-to-event outcomes within decision strata.',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--log-level', help='console log level (default: PARITY_AUDIT_LOG_LEVEL or INFO)')
    parser.add_argument('--env', choices=['production', 'development'], help='log format')
    sub = parser.add_subparsers(dest='command', required=True)

    audit = sub.add_parser('audit', help='full audit: curves, log-rank tests, p-value timeline, report')
    _add_audit_arguments(audit)

    curves = sub.add_parser('curves', help='survival curves only (CSV and SVG)')
    _add_audit_arguments(curves)

    simulate = sub.add_parser('simulate', help='write a synthetic cohort in the normalized format')
    simulate.add_argument('--dag-config', required=True)
    simulate.add_argument('--n', type=int, required=True, help='subjects (per group with --per-group)')
    simulate.add_argument('--seed', type=int, required=True)
    simulate.add_argument('--output', required=True)
    simulate.add_argument('--per-group', action='store_true')

    calibrate = sub.add_parser('calibrate', help='type-I error (H0 config) or power (H1 config)')
    calibrate.add_argument('--dag-config', required=True)
    calibrate.add_argument('--replications', type=int, default=1000)
    calibrate.add_argument('--alpha', type=float, default=0.05)
    calibrate.add_argument('--n-per-group', type=int, default=500)
    calibrate.add_argument('--seed', type=int, default=0)
    calibrate.add_argument('--stratum')
    calibrate.add_argument('--workers', type=int, default=1)
    calibrate.add_argument('--output-dir')

    return parser


def _resolve_mapping(reference: Any, input_path: Optional[str], delimiter: str) -> ColumnMapping:
    if isinstance(reference, dict):
        return build_model(ColumnMapping, reference, '<config>.mapping')
    if reference:
        return load_mapping(str(reference))
    if input_path and is_normalized_file(input_path, delimiter):
        return load_mapping('normalized')
    raise UsageError("--mapping is required unless the input is a normalized cohort file")


def config_from_args(args: argparse.Namespace) -> AuditConfig:
    """Собирает AuditConfig: YAML из --config, поверх - флаги командной строки"""
    data: Dict[str, Any] = load_yaml(args.config) if args.config else {}
    data.pop('notes', None)

    for name in (
        'input_path', 'alpha', 'output_dir', 'seed', 'delimiter',
        'dataset_id', 'workers', 'show_pooled', 'drop_invalid_rows',
    ):
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    if 'input_path' not in data:
        raise UsageError("--input is required")

    quantizer = dict(data.get('quantizer') or {})
    for flag, key in (
        ('quantizer', 'mode'),
        ('band_edges', 'band_edges'),
        ('band_labels', 'band_labels'),
        ('score_min', 'score_min'),
        ('score_max', 'score_max'),
    ):
        value = getattr(args, flag)
        if value is not None:
            quantizer[key] = value
    data['quantizer'] = quantizer

    horizons = dict(data.get('horizons') or {})
    for flag, key in (('horizon_start', 'start'), ('horizon_step', 'step'), ('horizon_end', 'end')):
        value = getattr(args, flag)
        if value is not None:
            horizons[key] = value
    data['horizons'] = horizons

    mapping = _resolve_mapping(
        args.mapping or data.get('mapping'),
        str(data['input_path']),
        data.get('delimiter', ','),
    )
    if args.score_column:
        mapping = mapping.with_score_column(args.score_column)
    data['mapping'] = mapping.model_dump()
    return build_model(AuditConfig, data, args.config or '<cli>')


def print_summary(lines) -> None:
    just_fix_windows_console()
    for _, band, text in lines:
        print(f"{BAND_STYLES.get(band, '')}{text}{Style.RESET_ALL}")


def _run(args: argparse.Namespace, run_id: str) -> int:
    if args.command in ('audit', 'curves'):
        config = config_from_args(args)
        run_dir = resolve_output_dir(config.output_dir) / f'run-{run_id}'
        setup_logging(environment=args.env, log_dir=run_dir / 'logs', level=args.log_level)
        cli_logger.info(f"Run started: {args.command}", event=LogEvent.RUN_STARTED, command=args.command)
        runner = run_audit if args.command == 'audit' else run_curves
        outcome = runner(config, run_dir=run_dir)
        print_summary(summary_lines(outcome.report))
        print(f"artifacts: {outcome.run_dir}")
        exit_code = outcome.exit_code

    elif args.command == 'simulate':
        setup_logging(environment=args.env, level=args.log_level)
        cli_logger.info("Run started: simulate", event=LogEvent.RUN_STARTED, command=args.command)
        cohort_path, meta_path = run_simulate(args.dag_config, args.n, args.seed, args.output, args.per_group)
        print(f"cohort: {cohort_path}")
        print(f"metadata: {meta_path}")
        exit_code = 0

    else:
        run_dir = resolve_output_dir(args.output_dir) / f'run-{run_id}'
        setup_logging(environment=args.env, log_dir=run_dir / 'logs', level=args.log_level)
        cli_logger.info("Run started: calibrate", event=LogEvent.RUN_STARTED, command=args.command)
        result = run_calibrate(
            args.dag_config,
            replications=args.replications,
            alpha=args.alpha,
            n_per_group=args.n_per_group,
            seed=args.seed,
            stratum=args.stratum,
            workers=args.workers,
            run_dir=run_dir,
        )
        print(
            f"{result.kind}: rate={result.rejection_rate:.4f} "
            f"95% CI [{result.ci_low:.4f}, {result.ci_high:.4f}] "
            f"({result.n_rejections}/{result.n_tests} tests, alpha={result.alpha})"
        )
        for stratum, rate in result.per_stratum_rates.items():
            print(f"  {stratum}: {rate:.4f}")
        exit_code = 0

    cli_logger.info(
        f"Run completed: {args.command}",
        event=LogEvent.RUN_COMPLETED,
        command=args.command,
        exit_code=exit_code,
    )
    return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    run_id = generate_run_id()
    with AuditContext(run_id=run_id):
        try:
            return _run(args, run_id)
        except ParityAuditError as exc:
            cli_logger.error(
                f"Run failed: {exc.message}",
                event=LogEvent.RUN_FAILED,
                exc_info=True,
                **exc.to_log_fields(),
            )
            print(f"error: {exc.message}", file=sys.stderr)
            return exc.exit_code
        except Exception as exc:
            cli_logger.critical(
                f"Run failed with an internal error: {exc}",
                event=LogEvent.RUN_FAILED,
                exc_info=True,
                error_type=type(exc).__name__,
            )
            print(f"internal error: {exc}", file=sys.stderr)
            return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
