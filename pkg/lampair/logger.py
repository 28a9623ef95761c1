"""Logging configuration for lampair"""

import logging
from pathlib import Path
from typing import Optional, Union

LOGGER_NAME = "lampair"
LOG_FILE = "lampair.log"

# checks may run on worker threads (--jobs), so file records carry the thread
FILE_FORMAT = (
    "%(asctime)s - %(name)s - %(threadName)s - %(levelname)s - %(message)s"
)
CONSOLE_FORMAT = "%(levelname)s: %(message)s"


def setup_logging(
    verbose: bool = False,
    enable_file_logging: bool = False,
    log_dir: Optional[Union[str, Path]] = None,
) -> logging.Logger:
    """Configure the ``lampair`` logger for one CLI invocation.

    Args:
        verbose: Log progress to stderr at INFO level
        enable_file_logging: Log everything, including per-check residuals,
            to ``<log_dir>/lampair.log`` at DEBUG level
        log_dir: Directory for the log file (default: ``./logs``)

    Returns:
        The configured logger; it has a NullHandler when both outputs
        are off, so library use stays silent
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    if enable_file_logging:
        directory = Path(log_dir) if log_dir is not None else Path.cwd() / "logs"
        directory.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(
            directory / LOG_FILE, encoding="utf-8"
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        logger.addHandler(file_handler)

    if verbose:
        console_handler = logging.StreamHandler()
        console_handler.setLevel(logging.INFO)
        console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
        logger.addHandler(console_handler)

    if not logger.handlers:
        logger.addHandler(logging.NullHandler())

    return logger
