"""CSV and JSON boundary of the command line.

CSV: header ``t,g`` (further columns allowed on output), decimal floats with
17 significant digits, LF line endings, no comments.
"""

import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, TextIO

import numpy as np

from ..distance_like import SampledFunction
from ..errors import ParameterError
from ..utils import to_jsonable

logger = logging.getLogger(__name__)

SAMPLE_HEADER = ("t", "g")


def _read_text(path: Optional[Path]) -> str:
    try:
        if path is None or str(path) == "-":
            return sys.stdin.read()
        return Path(path).read_text()
    except (OSError, UnicodeDecodeError) as e:
        raise ParameterError(f"cannot read {path or 'standard input'}: {e}")


def parse_sample_csv(text: str) -> SampledFunction:
    """Parse a ``t,g`` CSV into a SampledFunction."""
    header, _, body = text.partition("\n")
    columns = tuple(name.strip() for name in header.strip().split(","))
    if columns[:2] != SAMPLE_HEADER:
        raise ParameterError(f"CSV header must start with 't,g', got {header.strip()!r}")
    try:
        table = np.loadtxt(io.StringIO(body), delimiter=",", ndmin=2)
    except ValueError as e:
        raise ParameterError(f"malformed CSV row: {e}")
    if table.shape[0] < 2 or table.shape[1] < 2:
        raise ParameterError(f"CSV needs at least 2 rows of t,g values, got shape {table.shape}")
    logger.debug(f"Parsed {table.shape[0]} samples")
    return SampledFunction(table[:, 0], table[:, 1])


def read_sample_csv(path: Optional[Path]) -> SampledFunction:
    """Read a sample from a path, or from standard input for None or '-'."""
    return parse_sample_csv(_read_text(path))


def write_csv(columns: Dict[str, np.ndarray], stream: TextIO) -> None:
    """Write equally long columns under a one-line header."""
    names = list(columns)
    table = np.column_stack([np.asarray(columns[name], dtype=float) for name in names])
    np.savetxt(stream, table, fmt="%.17g", delimiter=",", header=",".join(names), comments="", newline="\n")


def write_sample_csv(f: SampledFunction, stream: TextIO) -> None:
    write_csv({"t": f.ts, "g": f.gs}, stream)


def dump_json(report: Any, stream: TextIO) -> None:
    """Write a report as indented JSON with snake_case keys."""
    stream.write(json.dumps(to_jsonable(report), indent=2))
    stream.write("\n")
