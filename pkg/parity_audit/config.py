"""
Конфигурация аудита: модели pydantic, загрузка YAML, пресеты и переменные окружения
"""

import os
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import InvalidConfigError, UnknownPresetError

OUTPUT_DIR_ENV = 'PARITY_AUDIT_OUTPUT_DIR'
DEFAULT_OUTPUT_DIR = Path('audit-output')

DEFAULT_BAND_EDGES = (5, 8)
DEFAULT_BAND_LABELS = ('low', 'medium', 'high')
DEFAULT_SCORE_RANGE = (1, 10)


class FrozenConfigModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')


class ColumnMapping(FrozenConfigModel):
    """
    Соответствие столбцов исходного файла полям EventRecord

    Если задан start_column, время считается как time_column - start_column.
    """

    group_column: str
    group_majority_value: str
    group_minority_value: str
    score_column: str
    time_column: str
    event_column: str
    start_column: Optional[str] = None
    preset: Optional[str] = None

    @model_validator(mode='after')
    def _check_distinct(self):
        columns = [self.group_column, self.score_column, self.time_column, self.event_column]
        if self.start_column:
            columns.append(self.start_column)
        if len(set(columns)) != len(columns):
            raise ValueError(f"mapped columns must be distinct, got {columns}")
        if not self.group_majority_value or not self.group_minority_value:
            raise ValueError("both group values must be declared")
        if self.group_majority_value == self.group_minority_value:
            raise ValueError("majority and minority group values must differ")
        return self

    @property
    def required_columns(self) -> List[str]:
        columns = [self.group_column, self.score_column, self.time_column, self.event_column]
        if self.start_column:
            columns.append(self.start_column)
        return columns

    def with_score_column(self, score_column: str) -> 'ColumnMapping':
        """Та же схема с другим столбцом балла (например, балл насильственного рецидива)"""
        return build_model(ColumnMapping, {**self.model_dump(), 'score_column': score_column}, 'score_column')


class ScoreQuantizer(FrozenConfigModel):
    """
    Перевод балла в страту

    banded: полосы по точкам разреза band_edges (начало каждой полосы, кроме первой);
    raw: балл сам по себе является стратой.
    """

    mode: Literal['banded', 'raw'] = 'banded'
    band_edges: List[int] = Field(default_factory=lambda: list(DEFAULT_BAND_EDGES))
    band_labels: List[str] = Field(default_factory=lambda: list(DEFAULT_BAND_LABELS))
    score_min: Optional[int] = None
    score_max: Optional[int] = None

    @model_validator(mode='before')
    @classmethod
    def _default_range(cls, data: Any):
        # banded по умолчанию проверяет диапазон 1-10, raw принимает наблюдаемый
        if isinstance(data, dict) and data.get('mode', 'banded') == 'banded':
            data = dict(data)
            data.setdefault('score_min', DEFAULT_SCORE_RANGE[0])
            data.setdefault('score_max', DEFAULT_SCORE_RANGE[1])
        return data

    @model_validator(mode='after')
    def _check_bands(self):
        if self.score_min is not None and self.score_max is not None and self.score_min > self.score_max:
            raise ValueError(f"score_min {self.score_min} exceeds score_max {self.score_max}")
        if self.mode == 'raw':
            return self
        edges = self.band_edges
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError(f"band_edges must be strictly increasing, got {edges}")
        if len(self.band_labels) != len(edges) + 1:
            raise ValueError("band_labels must have one more entry than band_edges")
        if len(set(self.band_labels)) != len(self.band_labels):
            raise ValueError("band_labels must be distinct")
        if self.score_min is not None and edges and edges[0] <= self.score_min:
            raise ValueError("first band edge must lie above score_min")
        if self.score_max is not None and edges and edges[-1] > self.score_max:
            raise ValueError("last band edge must not exceed score_max")
        return self

    def describe(self) -> Dict[str, Any]:
        return self.model_dump()


class HorizonGrid(FrozenConfigModel):
    """Сетка горизонтов: каждые step дней от start до end (None - до максимального времени)"""

    start: int = 28
    step: int = 7
    end: Optional[int] = None

    @field_validator('start', 'step')
    @classmethod
    def _positive(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("must be positive")
        return value

    @model_validator(mode='after')
    def _check_end(self):
        if self.end is not None and self.end < self.start:
            raise ValueError(f"end {self.end} precedes start {self.start}")
        return self


class AuditConfig(FrozenConfigModel):
    """Полная конфигурация прогона аудита"""

    input_path: Path
    mapping: ColumnMapping
    quantizer: ScoreQuantizer = Field(default_factory=ScoreQuantizer)
    alpha: float = 0.05
    horizons: HorizonGrid = Field(default_factory=HorizonGrid)
    output_dir: Path = DEFAULT_OUTPUT_DIR
    seed: Optional[int] = None
    delimiter: str = ','
    dataset_id: Optional[str] = None
    workers: int = 1
    show_pooled: bool = False
    drop_invalid_rows: bool = False

    @field_validator('alpha')
    @classmethod
    def _alpha_open_interval(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        return value

    @field_validator('workers')
    @classmethod
    def _workers_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("workers must be at least 1")
        return value

    @field_validator('delimiter')
    @classmethod
    def _single_char(cls, value: str) -> str:
        if len(value) != 1:
            raise ValueError("delimiter must be a single character")
        return value

    @property
    def resolved_dataset_id(self) -> str:
        return self.dataset_id or self.input_path.stem


def config_error_from_validation(exc: ValidationError, source: Optional[str] = None) -> InvalidConfigError:
    """Переводит ValidationError pydantic в InvalidConfigError с именем первого поля"""
    first = exc.errors()[0]
    field = '.'.join(str(part) for part in first.get('loc', ())) or '<root>'
    return InvalidConfigError(field, first.get('msg', str(exc)), source)


def build_model(model: type, data: Dict[str, Any], source: Optional[str] = None):
    """Создает модель конфигурации, переводя ошибки валидации в InvalidConfigError"""
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise config_error_from_validation(exc, source) from exc


def load_yaml(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Загружает YAML-файл конфигурации

    Raises:
        InvalidConfigError: Файл отсутствует, не разбирается или не является словарем
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except FileNotFoundError as exc:
        raise InvalidConfigError('<file>', 'file not found', str(path)) from exc
    except yaml.YAMLError as exc:
        raise InvalidConfigError('<file>', f'not valid YAML: {exc}', str(path)) from exc
    if not isinstance(data, dict):
        raise InvalidConfigError('<root>', 'top level must be a mapping', str(path))
    return data


def available_presets() -> List[str]:
    folder = resources.files('parity_audit') / 'presets'
    return sorted(p.name[:-4] for p in folder.iterdir() if p.name.endswith('.yml'))


def load_preset(name: str) -> ColumnMapping:
    """
    Загружает встроенный пресет схемы столбцов

    Raises:
        UnknownPresetError: Пресета с таким именем нет
    """
    resource = resources.files('parity_audit') / 'presets' / f'{name}.yml'
    if not resource.is_file():
        raise UnknownPresetError(name, available_presets())
    data = yaml.safe_load(resource.read_text(encoding='utf-8'))
    data.pop('notes', None)
    data.setdefault('preset', name)
    return build_model(ColumnMapping, data, f'preset:{name}')


def load_mapping(reference: str) -> ColumnMapping:
    """Имя пресета или путь к YAML-файлу схемы"""
    if reference in available_presets():
        return load_preset(reference)
    path = Path(reference)
    if not path.exists() and path.suffix not in ('.yml', '.yaml'):
        raise UnknownPresetError(reference, available_presets())
    data = load_yaml(path)
    data.pop('notes', None)
    return build_model(ColumnMapping, data, str(path))


def resolve_output_dir(configured: Optional[Union[str, Path]] = None) -> Path:
    """Переменная окружения PARITY_AUDIT_OUTPUT_DIR имеет приоритет над конфигурацией"""
    override = os.getenv(OUTPUT_DIR_ENV)
    if override:
        return Path(override)
    return Path(configured) if configured is not None else DEFAULT_OUTPUT_DIR
