"""Logger factory: stdlib loggers rendered through rich on stderr."""

import logging

from rich.console import Console
from rich.logging import RichHandler

_ROOT = "ringlab"
_console = Console(stderr=True)


def _configure_root() -> logging.Logger:
    root = logging.getLogger(_ROOT)
    if not root.handlers:
        handler = RichHandler(console=_console, show_path=False, markup=False)
        handler.setFormatter(logging.Formatter("%(message)s"))
        root.addHandler(handler)
        root.setLevel(logging.WARNING)
        root.propagate = False
    return root


def get_logger(name: str) -> logging.Logger:
    """Get a logger under the ringlab namespace."""
    _configure_root()
    if not name.startswith(_ROOT):
        name = f"{_ROOT}.{name}"
    return logging.getLogger(name)


def set_verbosity(level: int) -> None:
    """Map a -v count to a log level (0 warning, 1 info, 2+ debug)."""
    root = _configure_root()
    root.setLevel({0: logging.WARNING, 1: logging.INFO}.get(level, logging.DEBUG))
