import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Tuple, Union

import numpy as np
import pandas as pd

from ttspin.settings import settings


def configure_logging(level: Union[str, int, None] = None) -> None:
    """
    Install a single stream handler on the package logger.

    Args:
        level (Union[str, int], optional): Logging level, defaults to settings.LOG_LEVEL.
    """
    logger = logging.getLogger("ttspin")
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)
    logger.setLevel(level or settings.LOG_LEVEL)


def clean_response(response: Any) -> Any:
    """
    Recursively convert numpy scalars and arrays into plain Python values.

    Args:
        response (Any): A dict, list, tuple, numpy object or scalar.

    Returns:
        Any: The same structure built from dicts, lists, floats, ints, bools and strings.
    """
    if isinstance(response, dict):
        return {str(k): clean_response(v) for k, v in response.items()}
    if isinstance(response, (list, tuple)):
        return [clean_response(v) for v in response]
    if isinstance(response, np.ndarray):
        return clean_response(response.tolist())
    if isinstance(response, np.bool_):
        return bool(response)
    if isinstance(response, np.integer):
        return int(response)
    if isinstance(response, np.floating):
        return float(response)
    return response


def atomic_write(path: Union[str, Path], text: str) -> Path:
    """
    Write text to a temporary file next to path and move it into place.

    Args:
        path (Union[str, Path]): Destination.
        text (str): Content.

    Returns:
        Path: The destination path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as stream:
            stream.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path


def table_text(df: pd.DataFrame) -> str:
    """CSV text of a table with a header row and settings.OUTPUT_DIGITS significant digits."""
    return df.to_csv(index=False, float_format=f"%.{settings.OUTPUT_DIGITS}g", lineterminator="\n")


def json_text(payload: dict) -> str:
    """Indented, key-sorted JSON text of a response."""
    return json.dumps(clean_response(payload), indent=2, sort_keys=True) + "\n"


def export_table(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    """
    Export a table as CSV with a header row and 9 significant digits.

    Args:
        df (pd.DataFrame): The table.
        path (Union[str, Path]): Destination file.

    Returns:
        Path: The written file.
    """
    return atomic_write(path, table_text(df))


def export_json(payload: dict, path: Union[str, Path]) -> Path:
    """
    Export a response dictionary as indented, key-sorted JSON.

    Args:
        payload (dict): Already validated response.
        path (Union[str, Path]): Destination file.

    Returns:
        Path: The written file.
    """
    return atomic_write(path, json_text(payload))


def parse_grid(text: str) -> Tuple[int, int]:
    """
    Parse a grid resolution of the form NxM.

    Args:
        text (str): For example "200x100".

    Returns:
        Tuple[int, int]: (N, M), both at least 2.

    Raises:
        ValueError: If the text is malformed or a resolution is below 2.
    """
    try:
        n, m = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise ValueError(f"grid must look like NxM, got {text!r}")
    if n < 2 or m < 2:
        raise ValueError(f"grid resolutions must be >= 2, got {text!r}")
    return n, m


def parse_window(text: str) -> Tuple[float, float]:
    """
    Parse a mass window of the form LO:HI in GeV.

    Args:
        text (str): For example "346:400".

    Returns:
        Tuple[float, float]: (lo, hi).

    Raises:
        ValueError: If the text is malformed.
    """
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError:
        raise ValueError(f"window must look like LO:HI, got {text!r}")
    return lo, hi


def parse_correlations(text: str) -> np.ndarray:
    """
    Parse a correlation matrix given as 3 diagonal entries or 9 row-major entries, comma separated.

    Args:
        text (str): For example "-1,-1,-1" or "1,0,0,0,1,0,0,0,1".

    Returns:
        np.ndarray: The 3x3 matrix.

    Raises:
        ValueError: If the text is malformed.
    """
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise ValueError(f"correlations must be comma-separated numbers, got {text!r}")
    if len(values) == 3:
        return np.diag(values)
    if len(values) == 9:
        return np.array(values).reshape(3, 3)
    raise ValueError(f"correlations need 3 or 9 entries, got {len(values)}")
