"""Logging setup for command-line entry points.

Library modules only create ``logging.getLogger(__name__)``; handlers are
installed here, once, by whoever owns the process.
"""

from __future__ import annotations

import logging

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"


def setup_logging(level: str | int = "INFO") -> None:
    root = logging.getLogger()
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    if not any(getattr(h, "_dspline", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._dspline = True
        root.addHandler(handler)
    root.setLevel(level)


def kv(tag: str, **items) -> str:
    """Render ``TAG | key=value | ...`` log lines."""
    parts = [tag]
    for key, value in items.items():
        if isinstance(value, float):
            parts.append(f"{key}={value:.6g}")
        else:
            parts.append(f"{key}={value}")
    return " | ".join(parts)
