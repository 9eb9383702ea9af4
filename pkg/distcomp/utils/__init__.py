"""Utility functions for reports and messages."""

import dataclasses
import logging
import math
from enum import Enum
from typing import Any

import numpy as np
from rich.text import Text

from ..errors import DistCompError, DomainError

logger = logging.getLogger(__name__)


def format_curvature(k: float) -> str:
    """Short label for a curvature, e.g. '6', '-0.5', '-4000'."""
    return f"{k:g}"


def to_jsonable(obj: Any) -> Any:
    """Convert reports (dataclasses, enums, numpy values) to plain JSON types.

    Non-finite floats are rejected: every reported value is a finite decimal.
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(item) for item in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            raise DomainError(f"refusing to report a non-finite value ({value})")
        return value
    return obj


def format_error(error: DistCompError) -> Text:
    """One-line error message for standard error."""
    message = Text("error", style="bold red")
    message.append(f" ({type(error).__name__}): ", style="red")
    message.append(str(error))
    return message

