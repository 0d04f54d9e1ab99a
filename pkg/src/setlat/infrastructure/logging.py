"""Structured logging configuration.

Logs go to stderr so that reports on stdout stay byte-stable.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Optional

import structlog
from pythonjsonlogger import jsonlogger

from ..domain.exceptions import ConfigurationError


def configure_logging(
    level: str = "WARNING",
    format_type: str = "text",
    log_file: Optional[str] = None,
    enable_console: bool = True
) -> None:
    """
    Configure structured logging for the application.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        format_type: Log format ('json' or 'text')
        log_file: Optional file path for file logging
        enable_console: Whether to write log lines to stderr

    Raises:
        ConfigurationError: If logging configuration is invalid
    """
    numeric_level = getattr(logging, level.upper(), None)
    if not isinstance(numeric_level, int):
        raise ConfigurationError(f"Invalid log level: {level}")
    if format_type not in ("json", "text"):
        raise ConfigurationError(f"Invalid log format: {format_type}")

    try:
        logging.basicConfig(
            level=numeric_level,
            format="%(message)s",
            stream=sys.stderr,
            force=True,
        )
        if not enable_console:
            for handler in logging.getLogger().handlers:
                handler.setLevel(logging.CRITICAL + 1)

        processors = [
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            _round_floats,
            structlog.processors.JSONRenderer()
            if format_type == "json"
            else structlog.processors.KeyValueRenderer(key_order=[
                "timestamp", "level", "event", "check"
            ]),
        ]

        structlog.configure(
            processors=processors,
            wrapper_class=structlog.make_filtering_bound_logger(
                numeric_level if enable_console else logging.CRITICAL + 1
            ),
            context_class=dict,
            logger_factory=structlog.WriteLoggerFactory(file=sys.stderr),
            cache_logger_on_first_use=False,
        )

        if log_file:
            _configure_file_logging(log_file, format_type, numeric_level)

        _suppress_third_party_logs()

    except Exception as e:
        raise ConfigurationError(f"Logging configuration failed: {e}") from e


def _round_floats(logger: Any, method_name: str, event_dict: dict) -> dict:
    """Keep numeric fields readable: floats rounded to 12 significant digits."""
    for key, value in event_dict.items():
        if isinstance(value, float):
            event_dict[key] = float(f"{value:.12g}")
    return event_dict


def _configure_file_logging(log_file: str, format_type: str, level: int) -> None:
    """Configure file logging."""
    try:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_path)
        file_handler.setLevel(level)

        if format_type == "json":
            formatter = jsonlogger.JsonFormatter(
                fmt="%(asctime)s %(name)s %(levelname)s %(message)s"
            )
        else:
            formatter = logging.Formatter(
                "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
            )

        file_handler.setFormatter(formatter)
        logging.getLogger().addHandler(file_handler)

    except OSError as e:
        logging.warning(f"Failed to configure file logging: {e}")


def _suppress_third_party_logs() -> None:
    """Suppress noisy logs from third-party libraries."""
    for logger_name in ("matplotlib", "numba", "asyncio"):
        logging.getLogger(logger_name).setLevel(logging.WARNING)


# Convenience functions for structured logging
def get_logger(name: str) -> Any:
    """Get a structured logger instance."""
    return structlog.get_logger(name)


def log_check_started(check: str, grid_points: int, duals: int, **kwargs: Any) -> None:
    """Log the start of an optimality or convexity check."""
    logger = get_logger("setlat.checks")
    logger.info(
        "Check started",
        check=check,
        grid_points=grid_points,
        duals=duals,
        **kwargs
    )


def log_check_finished(check: str, verdict: str, duration_ms: float,
                       **kwargs: Any) -> None:
    """Log the verdict of a check."""
    logger = get_logger("setlat.checks")
    level = "info" if verdict in ("PASS", "CONDITIONAL_PASS") else "warning"
    getattr(logger, level)(
        "Check finished",
        check=check,
        verdict=verdict,
        duration_ms=duration_ms,
        **kwargs
    )


def log_low_confidence(source: str, reason: str, **kwargs: Any) -> None:
    """Log a numerical estimate that did not stabilize."""
    logger = get_logger("setlat.numerics")
    logger.warning("Low confidence estimate", source=source, reason=reason, **kwargs)
