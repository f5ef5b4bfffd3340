"""
Utility functions for torus-reciprocal
"""
import logging
import math
from typing import Optional, Sequence

import numpy as np

from config import TorusConfig


def setup_logging(debug: bool = False, log_file: Optional[str] = None) -> logging.Logger:
    """Setup logging configuration; a log file is only written when requested"""
    level = logging.DEBUG if debug else logging.INFO

    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )

    return logging.getLogger(__name__)


def validate_numeric_input(value: str, field_name: str) -> float:
    """
    Validate and convert numeric input

    Args:
        value: String value to validate
        field_name: Name of the field for error messages

    Returns:
        Converted float value

    Raises:
        ValueError: If value is not a finite number
    """
    try:
        cleaned_value = str(value).strip().replace(',', '.')
        result = float(cleaned_value)
    except (ValueError, TypeError):
        raise ValueError(f"Invalid numeric value for {field_name}: {value}")
    if not math.isfinite(result):
        raise ValueError(f"Invalid numeric value for {field_name}: {value}")
    return result


def validate_integer_input(value, field_name: str) -> int:
    """
    Validate and convert integer input; floats are accepted only when integral

    Raises:
        ValueError: If value is not a valid integer
    """
    if isinstance(value, bool):
        raise ValueError(f"Invalid integer value for {field_name}: {value}")
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError(f"Invalid integer value for {field_name}: {value}")
        return int(value)
    try:
        return int(value)
    except (ValueError, TypeError):
        raise ValueError(f"Invalid integer value for {field_name}: {value}")


def format_number(value: float, digits: int = TorusConfig.REPORT_DIGITS) -> str:
    """Shortest text for value after rounding to the given significant digits; integers lose the '.0'"""
    value = float(value)
    if value == 0:
        return "0"
    snapped = float(f"{value:.{digits}g}")
    if snapped.is_integer() and abs(snapped) < 1e15:
        return str(int(snapped))
    return repr(snapped)


def format_matrix(matrix: Sequence[Sequence[float]]) -> str:
    """Compact text form, e.g. [[2,1],[1,2]]"""
    rows = np.asarray(matrix, dtype=float)
    return "[" + ",".join("[" + ",".join(format_number(x) for x in row) + "]" for row in rows) + "]"
