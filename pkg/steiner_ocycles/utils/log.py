"""
Logging setup for steiner-ocycles.

Modules log through logging.getLogger(__name__). configure_logging attaches a
single handler to the package logger, either plain text or JSON lines produced
by python-json-logger, so batch runs can be ingested by log pipelines.
"""

import logging
import sys
from typing import Optional, TextIO

from pythonjsonlogger import jsonlogger

PACKAGE_LOGGER = "steiner_ocycles"
_TEXT_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_JSON_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def configure_logging(
    level: str = "WARNING", fmt: str = "text", stream: Optional[TextIO] = None
) -> logging.Logger:
    """
    Configure the package logger.

    Args:
        level: logging level name
        fmt: "text" or "json"
        stream: destination, stderr by default

    Returns:
        The configured package logger
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(logger.handlers):
        if getattr(handler, "_steiner_ocycles", False):
            logger.removeHandler(handler)

    handler = logging.StreamHandler(stream or sys.stderr)
    if fmt == "json":
        handler.setFormatter(jsonlogger.JsonFormatter(_JSON_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(_TEXT_FORMAT))
    handler._steiner_ocycles = True  # type: ignore[attr-defined]

    logger.addHandler(handler)
    logger.setLevel(level.upper())
    return logger
