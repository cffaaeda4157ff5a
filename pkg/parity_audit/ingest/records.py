"""
Сопоставление строк с EventRecord, сводка когорты и нормализованный формат
"""

from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

from ..config import ColumnMapping, ScoreQuantizer
from ..errors import IoFailureError, NoRowsSurviveError, RowValueError, ScoreOutOfRangeError
from ..helpers import ingest_logger
from ..survival.models import EventRecord
from .parser import (
    FIRST_DATA_LINE,
    IngestDiagnostics,
    RawRow,
    drop_invalid_row,
    is_missing,
    parse_cohort,
    parse_days,
    parse_event,
    read_table,
)
from .quantizer import quantize

NORMALIZED_COLUMNS = ['group', 'stratum', 'time_days', 'event']


@dataclass(frozen=True)
class CohortSummary:
    """
    Сводка когорты

    n_per_group_per_stratum: страта -> группа -> число записей
    """

    n_total: int
    n_per_group_per_stratum: Dict[str, Dict[str, int]]
    n_events: int
    n_censored: int
    n_dropped_missing: int = 0
    n_dropped_group: int = 0
    n_dropped_range: int = 0
    n_dropped_invalid: int = 0
    n_input: int = 0
    groups: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        cells = sum(sum(by_group.values()) for by_group in self.n_per_group_per_stratum.values())
        if cells != self.n_total:
            raise ValueError(f"cell counts sum to {cells}, expected {self.n_total}")
        if self.n_events + self.n_censored != self.n_total:
            raise ValueError("n_events + n_censored must equal n_total")

    def stratum_counts(self, stratum: str) -> Dict[str, int]:
        return dict(self.n_per_group_per_stratum.get(stratum, {}))

    def to_dict(self) -> dict:
        data = asdict(self)
        data['groups'] = list(self.groups)
        return data


def to_event_records(
    rows: Sequence[RawRow],
    mapping: ColumnMapping,
    q: ScoreQuantizer,
    diagnostics: Optional[IngestDiagnostics] = None,
) -> List[EventRecord]:
    """
    Строит EventRecord из проверенных строк

    Строки с группой вне объявленной пары отбрасываются. Балл вне диапазона
    при переданной diagnostics отбрасывается и считается, иначе - ошибка.

    Raises:
        ScoreOutOfRangeError: Балл вне диапазона и diagnostics не передана
    """
    declared = {mapping.group_majority_value, mapping.group_minority_value}
    records = []
    for row in rows:
        if row.group not in declared:
            if diagnostics is not None:
                diagnostics.n_dropped_group += 1
            ingest_logger.log_row_dropped(row.line, 'group', row.group)
            continue
        try:
            stratum = quantize(row.score, q)
        except ScoreOutOfRangeError:
            if diagnostics is None:
                raise
            diagnostics.n_dropped_range += 1
            ingest_logger.log_row_dropped(row.line, 'score_range', row.score)
            continue
        records.append(EventRecord(group=row.group, stratum=stratum, time=row.time, event=row.event))

    if diagnostics is not None:
        diagnostics.n_emitted = len(records)
    return records


def summarize(
    records: Sequence[EventRecord],
    diagnostics: Optional[IngestDiagnostics] = None,
) -> CohortSummary:
    """Сводка когорты со счетчиками разбиения входных строк"""
    cells: Dict[str, Counter] = {}
    for r in records:
        cells.setdefault(r.stratum, Counter())[r.group] += 1
    n_events = sum(1 for r in records if r.event)

    return CohortSummary(
        n_total=len(records),
        n_per_group_per_stratum={s: dict(sorted(c.items())) for s, c in sorted(cells.items())},
        n_events=n_events,
        n_censored=len(records) - n_events,
        n_dropped_missing=diagnostics.n_dropped_missing if diagnostics else 0,
        n_dropped_group=diagnostics.n_dropped_group if diagnostics else 0,
        n_dropped_range=diagnostics.n_dropped_range if diagnostics else 0,
        n_dropped_invalid=diagnostics.n_dropped_invalid if diagnostics else 0,
        n_input=diagnostics.n_input if diagnostics else len(records),
        groups=tuple(sorted({r.group for r in records})),
    )


def write_normalized(records: Sequence[EventRecord], path: Union[str, Path]) -> Path:
    """
    Записывает когорту в нормализованный формат group,stratum,time_days,event

    Событие кодируется 0/1, строки завершаются LF.
    """
    path = Path(path)
    frame = pd.DataFrame(
        {
            'group': [r.group for r in records],
            'stratum': [r.stratum for r in records],
            'time_days': [r.time for r in records],
            'event': [int(r.event) for r in records],
        },
        columns=NORMALIZED_COLUMNS,
    )
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator='\n', encoding='utf-8')
    except OSError as exc:
        raise IoFailureError(str(path), str(exc)) from exc
    return path


def read_normalized(
    path: Union[str, Path],
    diagnostics: Optional[IngestDiagnostics] = None,
    drop_invalid: bool = False,
) -> List[EventRecord]:
    """
    Читает нормализованный файл когорты

    При drop_invalid строки с неверным значением отбрасываются и
    считаются в diagnostics, иначе - ошибка.

    Raises:
        CohortFileNotFoundError, HeaderMissingColumnError, RowValueError
    """
    source = str(path)
    frame = read_table(path, NORMALIZED_COLUMNS)
    if diagnostics is not None:
        diagnostics.n_input = len(frame)
        diagnostics.columns = list(frame.columns)

    records = []
    for offset, values in enumerate(frame[NORMALIZED_COLUMNS].itertuples(index=False, name=None)):
        line = offset + FIRST_DATA_LINE
        if any(is_missing(v) for v in values):
            if diagnostics is not None:
                diagnostics.n_dropped_missing += 1
            continue
        group, stratum, time_days, event = values
        try:
            time = parse_days(time_days, line, 'time_days', source)
            flag = parse_event(event, line, 'event', source)
        except RowValueError as exc:
            if not drop_invalid or diagnostics is None:
                raise
            drop_invalid_row(exc, diagnostics)
            continue
        records.append(EventRecord(group=group.strip(), stratum=stratum.strip(), time=time, event=flag))
    if diagnostics is not None:
        diagnostics.n_emitted = len(records)
    return records


def is_normalized_file(path: Union[str, Path], delimiter: str = ',') -> bool:
    """Заголовок файла совпадает с нормализованным форматом"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            header = f.readline().rstrip('\r\n')
    except (OSError, UnicodeDecodeError):
        return False
    return [c.strip() for c in header.split(delimiter)] == NORMALIZED_COLUMNS


def load_cohort(
    path: Union[str, Path],
    mapping: ColumnMapping,
    quantizer: Optional[ScoreQuantizer] = None,
    delimiter: str = ',',
    drop_invalid: bool = False,
) -> Tuple[List[EventRecord], CohortSummary]:
    """
    Полная загрузка: разбор, сопоставление, квантование и сводка

    Нормализованный файл распознается по заголовку: страты берутся из файла,
    фильтруются только группы вне объявленной пары. drop_invalid отбрасывает
    строки с неверными значениями вместо ошибки.

    Raises:
        IngestError: Любая ошибка разбора; NoRowsSurviveError, если записей не осталось
    """
    quantizer = quantizer or ScoreQuantizer()
    source = str(path)

    if is_normalized_file(path, delimiter):
        diagnostics = IngestDiagnostics(path=source)
        loaded = read_normalized(path, diagnostics, drop_invalid)
        declared = {mapping.group_majority_value, mapping.group_minority_value}
        records = [r for r in loaded if r.group in declared]
        diagnostics.n_dropped_group = len(loaded) - len(records)
        diagnostics.n_emitted = len(records)
        ingest_logger.log_parsed(source, len(loaded), diagnostics.n_dropped_missing, NORMALIZED_COLUMNS)
    else:
        rows, diagnostics = parse_cohort(path, mapping, delimiter, drop_invalid)
        records = to_event_records(rows, mapping, quantizer, diagnostics)

    if not records:
        raise NoRowsSurviveError(
            source,
            n_input=diagnostics.n_input,
            n_dropped_missing=diagnostics.n_dropped_missing,
            n_dropped_group=diagnostics.n_dropped_group,
            n_dropped_range=diagnostics.n_dropped_range,
            n_dropped_invalid=diagnostics.n_dropped_invalid,
        )

    summary = summarize(records, diagnostics)
    ingest_logger.log_summary(summary.to_dict())
    return records, summary
