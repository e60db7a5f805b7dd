import datetime
import hashlib
import logging
import os
import sys
from pathlib import Path
from typing import Iterable, Union

_LOGGER_INITIALIZED = False
_HANDLER: "logging.Handler" = logging.StreamHandler(sys.stderr)
_HANDLER.setFormatter(
    logging.Formatter(
        fmt="%(levelname)s [%(asctime)s] %(name)s.%(funcName)s:%(lineno)d - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
)


def set_debug(enabled: bool) -> None:
    logger = logging.getLogger("railtriage")
    if enabled:
        logger.setLevel(logging.DEBUG)
        if _HANDLER not in logger.handlers:
            logger.addHandler(_HANDLER)
    else:
        logger.setLevel(logging.WARNING)
        if _HANDLER in logger.handlers:
            logger.removeHandler(_HANDLER)


def get_logger(name: str) -> logging.Logger:
    """
    Get a `logging.Logger` instance, and optionally
    set up debug logging based on the RAILTRIAGE_LOG_LEVEL environment variable.
    """
    global _LOGGER_INITIALIZED

    if not _LOGGER_INITIALIZED:
        _LOGGER_INITIALIZED = True

        log_level = os.environ.get("RAILTRIAGE_LOG_LEVEL", "").upper()
        if log_level == "DEBUG":
            set_debug(True)

    return logging.getLogger(name)


def content_version(data: Union[bytes, str]) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()[:16]


def combined_version(parts: Iterable[str]) -> str:
    digest = hashlib.sha256()
    for part in parts:
        digest.update(part.encode("utf-8"))
        digest.update(b"\x00")
    return digest.hexdigest()[:16]


def data_path(name: str) -> Path:
    """
    Location of a table shipped inside the package
    """
    return Path(__file__).parent / "data" / name


def utc_now() -> "datetime.datetime":
    return datetime.datetime.now(datetime.timezone.utc)
