import sys
from pathlib import Path

import pandas as pd
from pydantic import BaseModel

from ._logging import LOGGER

__all__ = ("write_csv", "write_json")

FLOAT_FORMAT = "%.15g"


def write_csv(frame: pd.DataFrame, path: str | Path | None = None) -> None:
    """Write a table as UTF-8 CSV with `%.15g` numbers and LF line endings.

    Args:
        frame (pd.DataFrame): table to write, the index is dropped.
        path (str | Path | None, optional): destination, stdout when None. Defaults to None.
    """
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    _emit(text, path)


def write_json(report: BaseModel, path: str | Path | None = None) -> None:
    """Write a pydantic model as indented JSON.

    Args:
        report (BaseModel): model to serialize.
        path (str | Path | None, optional): destination, stdout when None. Defaults to None.
    """
    _emit(report.model_dump_json(indent=2) + "\n", path)


def _emit(text: str, path: str | Path | None):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(path).expanduser().resolve()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    LOGGER.info(f"Wrote {path}")
