"""
Разбор файлов когорты с заголовком и разделителем
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

import pandas as pd

from ..config import ColumnMapping
from ..errors import (
    CohortFileNotFoundError,
    HeaderMissingColumnError,
    IngestError,
    NoRowsSurviveError,
    RowValueError,
)
from ..helpers import ingest_logger

MISSING_MARKERS = frozenset({'', 'na', 'nan', 'null', 'none'})
EVENT_TRUE = frozenset({'1', 'true'})
EVENT_FALSE = frozenset({'0', 'false'})

# Номер первой строки данных (заголовок - строка 1)
FIRST_DATA_LINE = 2


@dataclass
class IngestDiagnostics:
    """Счетчики разбиения входных строк"""

    path: str
    n_input: int = 0
    n_emitted: int = 0
    n_dropped_missing: int = 0
    n_dropped_group: int = 0
    n_dropped_range: int = 0
    n_dropped_invalid: int = 0
    columns: List[str] = field(default_factory=list)

    @property
    def n_dropped(self) -> int:
        return (
            self.n_dropped_missing + self.n_dropped_group
            + self.n_dropped_range + self.n_dropped_invalid
        )

    def partition_holds(self) -> bool:
        return self.n_emitted + self.n_dropped == self.n_input


@dataclass(frozen=True)
class RawRow:
    """Строка после проверки типов, до сопоставления групп и квантования"""

    line: int
    group: str
    score: int
    time: int
    event: bool


def is_missing(value: Optional[str]) -> bool:
    return value is None or value.strip().lower() in MISSING_MARKERS


def parse_int(value: str, line: int, column: str, path: Optional[str] = None) -> int:
    """Целое число; допускаются записи вида '210.0'"""
    text = value.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        number = float(text)
    except ValueError:
        raise RowValueError(line, column, value, "is not an integer", path) from None
    if not number.is_integer():
        raise RowValueError(line, column, value, "is not a whole number", path)
    return int(number)


def parse_days(value: str, line: int, column: str, path: Optional[str] = None) -> int:
    days = parse_int(value, line, column, path)
    if days < 0:
        raise RowValueError(line, column, value, "is negative", path)
    return days


def parse_event(value: str, line: int, column: str, path: Optional[str] = None) -> bool:
    text = value.strip().lower()
    if text in EVENT_TRUE:
        return True
    if text in EVENT_FALSE:
        return False
    raise RowValueError(line, column, value, "is not one of 0, 1, true, false", path)


def read_table(path: Union[str, Path], required: List[str], delimiter: str = ',') -> pd.DataFrame:
    """
    Читает файл как строки (без приведения типов) и проверяет заголовок

    Raises:
        CohortFileNotFoundError, HeaderMissingColumnError
    """
    path = Path(path)
    if not path.is_file():
        raise CohortFileNotFoundError(str(path))
    try:
        frame = pd.read_csv(
            path,
            sep=delimiter,
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            encoding='utf-8',
        )
    except pd.errors.EmptyDataError:
        raise HeaderMissingColumnError(required[0], str(path)) from None
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise IngestError(f"Cannot parse {path}: {exc}", path=str(path)) from exc

    frame.columns = [str(c).strip() for c in frame.columns]
    for column in required:
        if column not in frame.columns:
            raise HeaderMissingColumnError(column, str(path))
    return frame


def _parse_row(fields: dict, line: int, mapping: ColumnMapping, source: str) -> RawRow:
    time = parse_days(fields[mapping.time_column], line, mapping.time_column, source)
    if mapping.start_column:
        start = parse_days(fields[mapping.start_column], line, mapping.start_column, source)
        if time < start:
            raise RowValueError(
                line, mapping.time_column, fields[mapping.time_column],
                f"precedes {mapping.start_column} {start}", source,
            )
        time -= start

    return RawRow(
        line=line,
        group=fields[mapping.group_column].strip(),
        score=parse_int(fields[mapping.score_column], line, mapping.score_column, source),
        time=time,
        event=parse_event(fields[mapping.event_column], line, mapping.event_column, source),
    )


def drop_invalid_row(exc: RowValueError, diagnostics: IngestDiagnostics) -> None:
    """Считает строку с неверным значением как отброшенную"""
    diagnostics.n_dropped_invalid += 1
    ingest_logger.log_row_dropped(exc.line, 'invalid', exc.value)


def parse_cohort(
    path: Union[str, Path],
    mapping: ColumnMapping,
    delimiter: str = ',',
    drop_invalid: bool = False,
) -> Tuple[List[RawRow], IngestDiagnostics]:
    """
    Разбирает файл когорты по схеме столбцов

    Строки с пропуском в любом сопоставленном поле отбрасываются и
    считаются; значения неверного типа - ошибка с номером строки, а при
    drop_invalid такие строки тоже отбрасываются и считаются.

    Raises:
        CohortFileNotFoundError: Файла нет
        HeaderMissingColumnError: В заголовке нет сопоставленного столбца
        RowValueError: Значение не проходит проверку типа (без drop_invalid)
        NoRowsSurviveError: После фильтрации строк не осталось
    """
    source = str(path)
    required = mapping.required_columns
    frame = read_table(path, required, delimiter)
    diagnostics = IngestDiagnostics(path=source, n_input=len(frame), columns=list(frame.columns))

    rows: List[RawRow] = []
    for offset, values in enumerate(frame[required].itertuples(index=False, name=None)):
        line = offset + FIRST_DATA_LINE
        if any(is_missing(v) for v in values):
            diagnostics.n_dropped_missing += 1
            ingest_logger.log_row_dropped(line, 'missing', None)
            continue
        try:
            rows.append(_parse_row(dict(zip(required, values)), line, mapping, source))
        except RowValueError as exc:
            if not drop_invalid:
                raise
            drop_invalid_row(exc, diagnostics)

    ingest_logger.log_parsed(source, len(rows), diagnostics.n_dropped_missing, required)
    if not rows:
        raise NoRowsSurviveError(
            source,
            n_input=diagnostics.n_input,
            n_dropped_missing=diagnostics.n_dropped_missing,
            n_dropped_invalid=diagnostics.n_dropped_invalid,
        )
    return rows, diagnostics
