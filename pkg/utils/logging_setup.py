"""
Logging configuration for CLI and script entry points
"""
import logging
import sys
from pathlib import Path
from typing import Optional

from pythonjsonlogger import jsonlogger

from config.settings import settings

TEXT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
JSON_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'


def setup_logging(
    level: Optional[str] = None,
    log_format: Optional[str] = None,
    log_file: Optional[str] = None
) -> None:
    """
    Configure root logging once

    Args:
        level: Log level name (defaults to settings.log_level)
        log_format: "text" or "json" (defaults to settings.log_format)
        log_file: Optional file to mirror logs into (defaults to settings.log_file)
    """
    level = (level or settings.log_level).upper()
    log_format = log_format or settings.log_format
    log_file = log_file or settings.log_file

    if log_format == "json":
        formatter: logging.Formatter = jsonlogger.JsonFormatter(JSON_FORMAT)
    else:
        formatter = logging.Formatter(TEXT_FORMAT)

    # stdout carries results and witnesses, so logs go to stderr
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    for handler in handlers:
        handler.setFormatter(formatter)

    logging.basicConfig(level=level, handlers=handlers, force=True)
