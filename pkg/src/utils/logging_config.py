import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional, Union

CONSOLE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"
LOG_FILE = "maghom.log"
MAX_LOG_BYTES = 10 * 1024 * 1024


def _as_level(level: Union[int, str]) -> int:
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(level.upper())
    return resolved if isinstance(resolved, int) else logging.WARNING


def setup_logging(log_level: Union[int, str] = logging.WARNING,
                  log_dir: Optional[str] = None) -> logging.Logger:
    """
    Configure the root logger for a CLI run.

    Records go to stderr, leaving stdout to results. With `log_dir`, a
    rotating file in that directory receives the same records with source
    locations. Unknown level names fall back to WARNING.
    """
    level = _as_level(log_level)
    root = logging.getLogger()
    root.setLevel(level)
    for handler in list(root.handlers):
        root.removeHandler(handler)

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    root.addHandler(console)

    if log_dir:
        directory = Path(log_dir)
        directory.mkdir(parents=True, exist_ok=True)
        rotating = RotatingFileHandler(directory / LOG_FILE, maxBytes=MAX_LOG_BYTES, backupCount=5)
        rotating.setFormatter(logging.Formatter(FILE_FORMAT))
        root.addHandler(rotating)

    return root


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
