"""Structured logging for verification runs.

Events are dotted names: ``suite.starting``/``suite.completed`` bracket a run,
``suite.case.start``/``suite.case.done``/``suite.case.failed`` track each
geometry case and suite, and ``theorems.eq2.adjudicated`` records which
coefficient variant held. Debug level adds ``chart.sample.retry``,
``frame.built``, ``algebra.checked`` and ``props.checked``. The CLI binds
``run_id`` and ``suites`` as context variables, so every line of one run
carries them.
"""

from __future__ import annotations

import logging
import sys

import structlog

LOG_LEVEL_MAP: dict[str, int] = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}


def _stderr_logger(*_args: object) -> structlog.PrintLogger:
    # resolved per call so a swapped sys.stderr (test runners) is honoured
    return structlog.PrintLogger(sys.stderr)


def configure_logging(*, json_output: bool = False, log_level: str = "info") -> None:
    """Route verification events to stderr; stdout stays free for reports and eval output.

    Args:
        json_output: If True, output JSON lines. If False, pretty console output.
        log_level: Minimum log level (debug, info, warning, error).
    """
    level = LOG_LEVEL_MAP.get(log_level.lower(), logging.INFO)

    processors: list = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.TimeStamper(fmt="iso"),
    ]

    if json_output:
        # JSONRenderer needs format_exc_info to serialize tracebacks
        processors.append(structlog.processors.format_exc_info)
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer())

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )
