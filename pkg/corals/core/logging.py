"""
Tropical Corals - Logging setup

Library modules only call logging.getLogger(__name__); the CLI and the API
call configure_logging() once at startup.
"""

import json
import logging
import sys

from corals.core.config import Settings, settings as default_settings


class JsonFormatter(logging.Formatter):
    """One JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        if record.exc_info:
            payload["exc_info"] = self.formatException(record.exc_info)
        return json.dumps(payload, sort_keys=True)


PLAIN_FORMAT = "%(levelname)s %(name)s: %(message)s"


def configure_logging(settings: Settings = default_settings) -> logging.Logger:
    """Install a single stderr handler on the package logger."""
    logger = logging.getLogger("corals")
    logger.setLevel(settings.log_level.upper())
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    if settings.log_format == "json":
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter(PLAIN_FORMAT))
    logger.addHandler(handler)
    logger.propagate = False
    return logger
