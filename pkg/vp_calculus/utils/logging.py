"""
Logging Configuration Module

Every vp_calculus logger is a child of the "vp_calculus" package logger,
which owns the handlers. Records go to stderr so the CSV and text reports
written to stdout stay machine-readable; VPCALC_LOG_FILE adds a file handler.
"""

import logging
import os
import sys
from typing import Mapping, Optional, Union

PACKAGE_LOGGER = "vp_calculus"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

Level = Union[int, str]


def _resolve_level(level: Optional[Level]) -> int:
    if level is None:
        level = os.environ.get("VPCALC_LOG_LEVEL", "INFO")
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(level.upper())
    return resolved if isinstance(resolved, int) else logging.INFO


def setup_logger(log_file: Optional[str] = None, level: Optional[Level] = None) -> logging.Logger:
    """
    Configure the package logger.

    Handlers are attached on the first call only; later calls just change
    the level.

    Args:
        log_file (str, optional): Path of an additional log file. Defaults to VPCALC_LOG_FILE.
        level (int or str, optional): Logging level. Defaults to VPCALC_LOG_LEVEL, then INFO.

    Returns:
        logging.Logger: The package logger
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.setLevel(_resolve_level(level))
    if getattr(logger, "_vp_configured", False):
        return logger

    formatter = logging.Formatter(LOG_FORMAT)
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = log_file or os.environ.get("VPCALC_LOG_FILE")
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = False
    logger._vp_configured = True
    return logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger below the package logger, configuring the package logger on first use.

    Args:
        name (str): Dotted logger name; names outside the package are nested under it

    Returns:
        logging.Logger: The logger
    """
    package = logging.getLogger(PACKAGE_LOGGER)
    if not getattr(package, "_vp_configured", False):
        setup_logger()
    if name != PACKAGE_LOGGER and not name.startswith(PACKAGE_LOGGER + "."):
        name = f"{PACKAGE_LOGGER}.{name}"
    return logging.getLogger(name)


def set_level(level: Level) -> None:
    """
    Change the level of every vp_calculus logger.

    Args:
        level (str or int): A level name such as "debug" or a logging constant
    """
    logging.getLogger(PACKAGE_LOGGER).setLevel(_resolve_level(level))


class LoggerAdapter(logging.LoggerAdapter):
    """
    Logger adapter that appends "[key=value ...]" context to every message.
    """

    def __init__(self, logger: logging.Logger, extra: Optional[Mapping[str, object]] = None):
        super().__init__(logger, dict(extra or {}))

    def process(self, msg, kwargs):
        """
        Append the context to a message.

        Args:
            msg (str): The log message
            kwargs (dict): Keyword arguments for the log call

        Returns:
            tuple: (message with context, kwargs)
        """
        context = " ".join(f"{key}={value}" for key, value in self.extra.items())
        if context:
            msg = f"{msg} [{context}]"
        return msg, kwargs


def get_context_logger(name: str, context: Optional[Mapping[str, object]] = None) -> LoggerAdapter:
    """
    Get a logger that tags its messages with context, e.g. the integration
    step and variable, or the scenario being run.

    Args:
        name (str): Logger name
        context (Mapping, optional): Context values

    Returns:
        LoggerAdapter: The adapter
    """
    return LoggerAdapter(get_logger(name), context)
