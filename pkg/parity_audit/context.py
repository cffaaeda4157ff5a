"""
Управление контекстом прогона для логирования
Использует context variables для run ID, страты и горизонта
Обеспечивает thread-safe работу, в том числе в пулах потоков
"""

import contextvars
import uuid
from contextvars import ContextVar
from datetime import datetime, timezone
from functools import wraps
from typing import Any, Callable, Dict, Optional

_run_id_ctx: ContextVar[Optional[str]] = ContextVar('run_id', default=None)
_stratum_ctx: ContextVar[Optional[str]] = ContextVar('stratum', default=None)
_horizon_ctx: ContextVar[Optional[int]] = ContextVar('horizon', default=None)
_extra_fields_ctx: ContextVar[Dict[str, Any]] = ContextVar('extra_fields', default={})


def generate_run_id() -> str:
    """
    Генерирует новый run ID: UTC-штамп + короткий UUID

    Returns:
        str: Идентификатор прогона, пригодный как имя каталога

    Example:
        >>> generate_run_id()
        '20261019T070512Z-3f2a9c1e'
    """
    stamp = datetime.now(timezone.utc).strftime('%Y%m%dT%H%M%SZ')
    return f"{stamp}-{uuid.uuid4().hex[:8]}"


def set_run_id(run_id: Optional[str] = None) -> str:
    """
    Устанавливает run ID для текущего контекста
    Если ID не указан, генерируется автоматически

    Args:
        run_id: ID или None для автогенерации

    Returns:
        str: Установленный run ID
    """
    if run_id is None:
        run_id = generate_run_id()
    _run_id_ctx.set(run_id)
    return run_id


def get_run_id() -> Optional[str]:
    """Получает run ID из текущего контекста"""
    return _run_id_ctx.get()


def clear_run_id():
    _run_id_ctx.set(None)


def set_stratum(stratum: Optional[str]):
    """Устанавливает страту, которую сейчас обрабатывает пайплайн"""
    _stratum_ctx.set(stratum)


def get_stratum() -> Optional[str]:
    return _stratum_ctx.get()


def set_horizon(horizon: Optional[int]):
    _horizon_ctx.set(horizon)


def get_horizon() -> Optional[int]:
    return _horizon_ctx.get()


def set_extra_field(key: str, value: Any):
    """Добавляет дополнительное поле в контекст логирования"""
    extra = _extra_fields_ctx.get().copy()
    extra[key] = value
    _extra_fields_ctx.set(extra)


def get_extra_fields() -> Dict[str, Any]:
    return _extra_fields_ctx.get().copy()


def clear_extra_fields():
    _extra_fields_ctx.set({})


def clear_all_context():
    """
    Очищает весь контекст логирования

    Example:
        >>> clear_all_context()
        >>> get_run_id() is None
        True
    """
    clear_run_id()
    set_stratum(None)
    set_horizon(None)
    clear_extra_fields()


def get_current_context() -> Dict[str, Any]:
    """
    Получает весь текущий контекст логирования

    Returns:
        Dict[str, Any]: run_id, stratum, horizon и extra_fields
    """
    return {
        'run_id': get_run_id(),
        'stratum': get_stratum(),
        'horizon': get_horizon(),
        'extra_fields': get_extra_fields(),
    }


class AuditContext:
    """
    Контекстный менеджер, выставляющий контекст прогона на время блока

    Предыдущие значения восстанавливаются на выходе, поэтому вложенные
    блоки (прогон -> страта -> горизонт) корректно раскручиваются.

    Attributes:
        run_id: ID прогона
        stratum: Метка страты
        horizon: Горизонт наблюдения в днях
        auto_generate_run_id: Генерировать run_id, если он не задан и не выставлен ранее
        **extra_fields: Дополнительные поля

    Example:
        >>> with AuditContext(run_id='run-1'):
        ...     with AuditContext(stratum='low'):
        ...         logger.info('Testing stratum')
    """

    def __init__(
        self,
        run_id: Optional[str] = None,
        stratum: Optional[str] = None,
        horizon: Optional[int] = None,
        auto_generate_run_id: bool = False,
        **extra_fields
    ):
        self.run_id = run_id
        self.stratum = stratum
        self.horizon = horizon
        self.auto_generate_run_id = auto_generate_run_id
        self.extra_fields = extra_fields
        self._tokens = []

    def __enter__(self):
        if self.run_id is not None:
            self._tokens.append((_run_id_ctx, _run_id_ctx.set(self.run_id)))
        elif self.auto_generate_run_id and get_run_id() is None:
            self._tokens.append((_run_id_ctx, _run_id_ctx.set(generate_run_id())))

        if self.stratum is not None:
            self._tokens.append((_stratum_ctx, _stratum_ctx.set(self.stratum)))

        if self.horizon is not None:
            self._tokens.append((_horizon_ctx, _horizon_ctx.set(self.horizon)))

        if self.extra_fields:
            merged = {**_extra_fields_ctx.get(), **self.extra_fields}
            self._tokens.append((_extra_fields_ctx, _extra_fields_ctx.set(merged)))

        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        # Восстанавливаем в обратном порядке
        while self._tokens:
            var, token = self._tokens.pop()
            var.reset(token)


def with_audit_context(**context_kwargs):
    """
    Декоратор для автоматической установки контекста прогона

    Example:
        >>> @with_audit_context(auto_generate_run_id=True)
        ... def run(config):
        ...     logger.info('Run started')
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            with AuditContext(**context_kwargs):
                return func(*args, **kwargs)
        return wrapper

    return decorator


def bind_context(func: Callable) -> Callable:
    """
    Привязывает текущий контекст к функции для запуска в другом потоке

    Пулы потоков не наследуют ContextVar'ы вызывающего потока; функция,
    возвращенная отсюда, выполняется в копии контекста на момент вызова.

    Example:
        >>> executor.map(bind_context(process_stratum), strata)
    """
    ctx = contextvars.copy_context()

    @wraps(func)
    def wrapper(*args, **kwargs):
        return ctx.copy().run(func, *args, **kwargs)

    return wrapper
