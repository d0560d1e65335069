"""
Logging, console and progress helpers
"""
import logging
from typing import Iterable, Optional

from rich.console import Console
from rich.logging import RichHandler
from tqdm import tqdm

from .config import LOG_LEVEL, PROGRESS_ENABLED

LOGGER_NAME = "tree_distiller"

# Status lines and log records both go to stderr so stdout stays parseable
console = Console(stderr=True)


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger under the distiller namespace

    Args:
        name: Usually ``__name__`` of the calling module

    Returns:
        Logger named ``tree_distiller.<name>``
    """
    if not name.startswith(LOGGER_NAME):
        name = f"{LOGGER_NAME}.{name}"
    return logging.getLogger(name)


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """
    Install a rich handler on the distiller's root logger

    Args:
        level: Level name, defaults to TREE_DISTILLER_LOG_LEVEL

    Returns:
        The configured root logger
    """
    root = logging.getLogger(LOGGER_NAME)
    root.handlers.clear()
    handler = RichHandler(console=console, show_path=False, markup=False)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel((level or LOG_LEVEL).upper())
    root.propagate = False
    return root


def progress(iterable: Iterable, desc: str, total: Optional[int] = None):
    """Wrap an iterable in a tqdm bar when TREE_DISTILLER_PROGRESS is set"""
    return tqdm(iterable, desc=desc, total=total, disable=not PROGRESS_ENABLED, leave=False)
