"""Logging utility for fraq.

The library only attaches a NullHandler; the CLI calls configure_logging()
to write a debug log under the data directory (and to stderr when verbose).

Usage:
    from fraq.logger import logger

    logger.debug("Debug message")
    logger.info("Info message")
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from .config import get_data_dir

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

logger = logging.getLogger("fraq")
logger.addHandler(logging.NullHandler())

# Don't propagate to root logger
logger.propagate = False


def default_log_file() -> Path:
    """
    Get the default log file location.

    Returns:
        Path to ~/<data dir>/logs/fraq.log
    """
    return Path.home() / get_data_dir() / "logs" / "fraq.log"


def configure_logging(verbose: bool = False, log_file: Optional[Path] = None) -> Optional[Path]:
    """
    Attach file (and optionally stderr) handlers to the package logger.

    Args:
        verbose: Also log INFO and above to stderr
        log_file: Log file path; defaults to default_log_file()

    Returns:
        Path of the log file, or None if it could not be created
    """
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)
    logger.setLevel(logging.DEBUG)

    for handler in list(logger.handlers):
        if not isinstance(handler, logging.NullHandler):
            logger.removeHandler(handler)
            handler.close()

    path: Optional[Path] = Path(log_file) if log_file else default_log_file()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(path, mode="a")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    except OSError:
        # Read-only home; keep going without a file log
        path = None

    if verbose:
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setLevel(logging.INFO)
        stream_handler.setFormatter(formatter)
        logger.addHandler(stream_handler)

    logger.debug("fraq logging initialized (log file: %s)", path)
    return path
