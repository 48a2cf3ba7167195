import os
import sys

from pathlib import Path
from loguru import logger as _logger
from loguru._logger import Logger  # this is just a type hint

from ._const import LOG_LEVEL_ENV

__all__ = ("Logger", "LOGGER", "format_record")


_CWD_DIRECTORY = Path(os.getcwd())


def format_record(record) -> str:
    """One line per record: `LEVEL | file:line | message`, paths relative to the cwd."""
    file_path = Path(record["file"].path)
    try:
        file_path = file_path.relative_to(_CWD_DIRECTORY)
    except ValueError:
        pass
    return f"{record['level'].name} | {file_path}:{record['line']} | {record['message']}\n"


LOGGER = _logger.bind(package="photonq")


def set_level(level: str):
    # stdout is reserved for CSV/JSON output of the command line tool
    LOGGER.remove()
    LOGGER.add(sink=sys.stderr, format=format_record, level=level)


LOGGER.set_level = set_level

LOGGER.set_level(os.environ.get(LOG_LEVEL_ENV, "INFO"))
