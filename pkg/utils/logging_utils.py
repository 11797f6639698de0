"""
Logging utility functions for the monogamy audit toolkit.

This module configures the application logger and provides one helper
per domain event (measure evaluation, optimizer run, bound violation,
audit summary, lifecycle event), each emitting a single structured line.
"""

import logging
import os
from datetime import datetime
from typing import Any, Dict, Optional

LOGGER_NAME = 'monogamy_audit'


def setup_logging(log_level: str = "INFO", log_to_file: bool = False,
                  log_directory: str = "logs") -> logging.Logger:
    """
    Setup application logging.

    Args:
        log_level (str): Logging level (DEBUG, INFO, WARNING, ERROR)
        log_to_file (bool): Whether to log to file in addition to console
        log_directory (str): Directory for timestamped log files

    Returns:
        logging.Logger: Configured logger instance
    """
    level = getattr(logging, log_level.upper(), logging.INFO)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    logger.handlers.clear()

    formatter = logging.Formatter(
        '%(asctime)s | %(name)s | %(levelname)s | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Diagnostics go to stderr; stdout is reserved for command results
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_to_file:
        os.makedirs(log_directory, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        log_filename = os.path.join(log_directory, f"monogamy_{timestamp}.log")
        file_handler = logging.FileHandler(log_filename)
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = False

    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Child logger of the application logger, e.g. `monogamy_audit.entanglement.measures`."""
    if not name:
        return logging.getLogger(LOGGER_NAME)
    return logging.getLogger(f"{LOGGER_NAME}.{name}")


def log_measure_evaluation(measure: str, partition: str, value: float, method: str,
                           logger: Optional[logging.Logger] = None):
    """
    Log a single entanglement measure evaluation.

    Args:
        measure (str): Measure name (concurrence, negativity, cren)
        partition (str): Partition in `i:jk` form
        value (float): Computed value
        method (str): Evaluation route
        logger (Optional[logging.Logger]): Logger to use (creates default if None)
    """
    if logger is None:
        logger = get_logger()

    info = {
        'measure': measure,
        'partition': partition,
        'value': f"{value:.12g}",
        'method': method,
    }

    logger.debug(f"MEASURE: {info}")


def log_optimizer_run(objective: str, restarts: int, best_value: float, best_restart: int,
                      converged: bool, logger: Optional[logging.Logger] = None):
    """
    Log the outcome of a convex-roof optimization.

    Args:
        objective (str): Objective name
        restarts (int): Number of restarts run
        best_value (float): Best objective value found
        best_restart (int): Restart index that produced it
        converged (bool): Whether every restart met the tolerance
        logger (Optional[logging.Logger]): Logger to use (creates default if None)
    """
    if logger is None:
        logger = get_logger()

    info = {
        'objective': objective,
        'restarts': restarts,
        'best_value': f"{best_value:.12g}",
        'best_restart': best_restart,
        'converged': converged,
    }

    if converged:
        logger.info(f"OPTIMIZER RUN: {info}")
    else:
        logger.warning(f"OPTIMIZER RUN (iteration cap reached): {info}")


def log_bound_violation(label: str, nu: float, bound_id: str, margin: float, verdict: str,
                        logger: Optional[logging.Logger] = None):
    """
    Log a bound whose verdict is not a certain hold.

    Args:
        label (str): State label
        nu (float): Power of the inequality
        bound_id (str): Bound identifier
        margin (float): LHS minus worst-case RHS
        verdict (str): Verdict value
        logger (Optional[logging.Logger]): Logger to use (creates default if None)
    """
    if logger is None:
        logger = get_logger()

    info = {
        'label': label,
        'nu': nu,
        'bound_id': bound_id,
        'margin': f"{margin:.6e}",
        'verdict': verdict,
    }

    if verdict == 'violated':
        logger.error(f"BOUND VIOLATION: {info}")
    else:
        logger.warning(f"BOUND UNCERTAIN: {info}")


def log_audit_summary(label: str, verdict_counts: Dict[str, int], logger: Optional[logging.Logger] = None):
    """
    Log per-verdict counts for a finished audit.

    Args:
        label (str): State or batch label
        verdict_counts (Dict[str, int]): Number of rows per verdict
        logger (Optional[logging.Logger]): Logger to use (creates default if None)
    """
    if logger is None:
        logger = get_logger()

    logger.info(f"AUDIT SUMMARY: {{'label': {label!r}, 'verdicts': {verdict_counts}}}")


def log_system_event(event_type: str, message: str, details: Optional[Dict[str, Any]] = None,
                     logger: Optional[logging.Logger] = None):
    """
    Log a general system event.

    Args:
        event_type (str): Type of event (e.g., "STARTUP", "SHUTDOWN", "ERROR")
        message (str): Event message
        details (Optional[Dict[str, Any]]): Additional event details
        logger (Optional[logging.Logger]): Logger to use (creates default if None)
    """
    if logger is None:
        logger = get_logger()

    log_message = f"{event_type}: {message}"
    if details:
        log_message += f" | Details: {details}"

    logger.info(log_message)
