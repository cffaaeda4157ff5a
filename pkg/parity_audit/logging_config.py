"""
Централизованная конфигурация логирования parity_audit
Поддерживает структурированное JSON-логирование с run ID и стратой
"""

import logging
import logging.config
import os
import socket
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pythonjsonlogger import jsonlogger

SERVICE_NAME = 'parity-audit'


class StructuredFormatter(jsonlogger.JsonFormatter):
    """
    Форматтер для структурированного JSON-логирования
    Добавляет метаданные прогона и контекстную информацию
    """

    def __init__(self, service_name: str = SERVICE_NAME, **kwargs):
        kwargs.setdefault('json_ensure_ascii', False)
        kwargs.setdefault('json_default', str)
        super().__init__(**kwargs)
        self.service_name = service_name
        self.hostname = os.getenv('HOSTNAME') or socket.gethostname()

    def add_fields(self, log_record: Dict[str, Any], record: logging.LogRecord, message_dict: Dict[str, Any]):
        """Собирает JSON-запись в фиксированном порядке ключей"""
        log_record['timestamp'] = datetime.fromtimestamp(record.created, timezone.utc).isoformat().replace('+00:00', 'Z')
        log_record['level'] = record.levelname
        log_record['logger'] = record.name
        log_record['component'] = getattr(record, 'component', None) or record.name.rsplit('.', 1)[-1]
        log_record['message'] = record.getMessage()
        log_record['service'] = self.service_name
        log_record['hostname'] = self.hostname
        log_record['thread_name'] = record.threadName

        for key in ('run_id', 'stratum', 'horizon'):
            value = getattr(record, key, None)
            if value is not None:
                log_record[key] = value

        # Поля из контекста, затем поля конкретного вызова
        context_fields = getattr(record, 'context_fields', None)
        if context_fields:
            log_record.update(context_fields)
        extra_fields = getattr(record, 'extra_fields', None)
        if extra_fields:
            log_record.update(extra_fields)

        log_record['location'] = {
            'file': record.pathname,
            'line': record.lineno,
            'function': record.funcName,
            'module': record.module,
        }

        if record.exc_info and record.exc_info[0] is not None:
            log_record['exception'] = {
                'type': record.exc_info[0].__name__,
                'message': str(record.exc_info[1]),
                'traceback': message_dict.get('exc_info') or self.formatException(record.exc_info),
            }

        if record.stack_info:
            log_record['stack_info'] = record.stack_info


class RunContextFilter(logging.Filter):
    """
    Фильтр для добавления run_id / stratum / horizon в каждую запись лога
    Значения берутся из ContextVar'ов модуля context
    """

    def filter(self, record: logging.LogRecord) -> bool:
        from .context import get_extra_fields, get_horizon, get_run_id, get_stratum

        if getattr(record, 'run_id', None) is None:
            record.run_id = get_run_id()
        if getattr(record, 'stratum', None) is None:
            record.stratum = get_stratum()
        if getattr(record, 'horizon', None) is None:
            record.horizon = get_horizon()
        if not hasattr(record, 'context_fields'):
            record.context_fields = get_extra_fields()
        return True


def build_logging_config(
    environment: str = 'production',
    log_dir: Optional[Union[str, Path]] = None,
    level: str = 'INFO',
) -> Dict[str, Any]:
    """
    Строит словарь для logging.config.dictConfig

    Args:
        environment: 'production' (JSON в консоль) или 'development' (читаемый формат)
        log_dir: Каталог для файловых логов; None - только консоль
        level: Уровень консольного вывода

    Returns:
        Dict[str, Any]: Конфигурация логирования
    """
    level = level.upper()
    console_handler = 'console_json' if environment == 'production' else 'console_simple'
    handlers = [console_handler]

    config: Dict[str, Any] = {
        'version': 1,
        'disable_existing_loggers': False,

        'formatters': {
            'json': {
                '()': StructuredFormatter,
                'service_name': SERVICE_NAME,
            },
            'detailed': {
                'format': '%(asctime)s [%(levelname)s] [%(run_id)s] %(name)s:%(lineno)d - %(message)s',
                'datefmt': '%Y-%m-%d %H:%M:%S',
            },
        },

        'filters': {
            'run_context': {
                '()': RunContextFilter,
            },
        },

        'handlers': {
            # Консоль - JSON для production; stdout занят сводкой CLI
            'console_json': {
                'class': 'logging.StreamHandler',
                'level': level,
                'formatter': 'json',
                'filters': ['run_context'],
                'stream': 'ext://sys.stderr',
            },
            # Консоль - читаемый формат для development
            'console_simple': {
                'class': 'logging.StreamHandler',
                'level': level,
                'formatter': 'detailed',
                'filters': ['run_context'],
                'stream': 'ext://sys.stderr',
            },
        },

        'loggers': {
            'parity_audit': {
                'level': 'DEBUG' if level == 'DEBUG' else 'INFO',
                'handlers': handlers,
                'propagate': False,
            },
            # Внешние библиотеки - снижаем уровень
            'matplotlib': {
                'level': 'WARNING',
            },
        },
    }

    if log_dir is not None:
        log_dir = Path(log_dir)
        config['handlers']['file_json'] = {
            'class': 'logging.handlers.RotatingFileHandler',
            'level': 'DEBUG' if level == 'DEBUG' else 'INFO',
            'formatter': 'json',
            'filters': ['run_context'],
            'filename': str(log_dir / 'parity_audit.json.log'),
            'maxBytes': 50 * 1024 * 1024,  # 50MB
            'backupCount': 5,
            'encoding': 'utf-8',
        }
        config['handlers']['file_errors'] = {
            'class': 'logging.handlers.RotatingFileHandler',
            'level': 'ERROR',
            'formatter': 'json',
            'filters': ['run_context'],
            'filename': str(log_dir / 'errors.json.log'),
            'maxBytes': 10 * 1024 * 1024,  # 10MB
            'backupCount': 5,
            'encoding': 'utf-8',
        }
        handlers.extend(['file_json', 'file_errors'])

    return config


def setup_logging(
    environment: Optional[str] = None,
    log_dir: Optional[Union[str, Path]] = None,
    level: Optional[str] = None,
):
    """
    Инициализирует систему логирования

    Args:
        environment: 'production' или 'development'; по умолчанию PARITY_AUDIT_ENV
        log_dir: Каталог для файловых логов (создается при необходимости)
        level: Уровень консоли; по умолчанию PARITY_AUDIT_LOG_LEVEL или INFO
    """
    environment = environment or os.getenv('PARITY_AUDIT_ENV', 'production')
    level = level or os.getenv('PARITY_AUDIT_LOG_LEVEL', 'INFO')
    if log_dir is not None:
        Path(log_dir).mkdir(parents=True, exist_ok=True)

    logging.config.dictConfig(build_logging_config(environment, log_dir, level))

    logger = logging.getLogger('parity_audit.logging')
    logger.debug(
        f"Logging initialized in {environment} mode",
        extra={
            'component': 'logging',
            'extra_fields': {
                'log_directory': str(log_dir) if log_dir else None,
                'environment': environment,
            },
        },
    )
