"""Package logger and a wall-time helper for pipeline stages."""

import logging
import sys
import time
from contextlib import contextmanager
from typing import Iterator

LOGGER_NAME = "genfunc"


def setup_logging(level: int | str = logging.INFO) -> logging.Logger:
    """Configure the package logger once; later calls only change its level.

    *level* may also be a name such as ``"debug"``, as read from ``GENFUNC_LOG_LEVEL``;
    unknown names fall back to INFO.
    """
    if isinstance(level, str):
        resolved = logging.getLevelName(level.upper())
        level = resolved if isinstance(resolved, int) else logging.INFO
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(
            "[%(asctime)s] %(levelname)-8s %(name)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        ))
        logger.addHandler(handler)
    return logger


log = setup_logging()


@contextmanager
def timed(what: str, level: int = logging.DEBUG) -> Iterator[None]:
    """Log how long the enclosed block took."""
    start = time.perf_counter()
    try:
        yield
    finally:
        log.log(level, "%s took %.2fs", what, time.perf_counter() - start)
