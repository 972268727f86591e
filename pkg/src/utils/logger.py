"""Logging configuration and utilities."""

import sys
import time
from functools import wraps
from pathlib import Path
from typing import Optional

from loguru import logger

from src.config.settings import settings


def setup_logger(level: Optional[str] = None):
    """
    Configure the logger with the format and sinks from settings.

    Args:
        level: Override for ``settings.log_level`` (the CLI passes DEBUG for ``--debug``)

    Returns:
        The configured loguru logger
    """
    level = (level or settings.log_level).upper()

    # Remove default and previously installed handlers
    logger.remove()

    logger.add(
        sys.stderr,
        format=settings.log_format,
        level=level,
        colorize=True,
        backtrace=True,
        diagnose=False,
    )

    if settings.log_file:
        log_path = Path(settings.log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        logger.add(
            settings.log_file,
            format=settings.log_format,
            level=level,
            rotation="10 MB",
            retention="7 days",
            compression="zip",
            backtrace=True,
            diagnose=False,
        )

    return logger


# Initialize logger
logger = setup_logger()


class LoggerMixin:
    """Mixin class to provide logging capabilities to other classes."""

    @property
    def logger(self):
        """Get a logger instance bound to the class name."""
        return logger.bind(classname=self.__class__.__name__)


def log_execution_time(func):
    """Decorator to log function execution time at DEBUG level."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        execution_time = time.perf_counter() - start_time
        logger.debug(f"{func.__qualname__} executed in {execution_time:.2f} seconds")
        return result

    return wrapper


def log_errors(func):
    """Decorator to log exceptions with their traceback and re-raise them."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except Exception as e:
            logger.opt(exception=e).error(f"Error in {func.__qualname__}: {e}")
            raise

    return wrapper
