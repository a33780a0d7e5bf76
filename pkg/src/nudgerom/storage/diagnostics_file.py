# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Diagnostics CSV files.

A file starts with `# key=value` provenance lines followed by a CSV table with the columns
step, time, mu, energy_rom, energy_true, l2_error, dat. Floats are written with 17 significant digits so a
file round-trips exactly and identical runs give identical bytes.
"""

import io
import logging
from typing import Dict
from typing import Iterable
from typing import Tuple

import numpy as np
import pandas as pd

from nudgerom.util.exception_handlers.errors import SchemaError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
DIAGNOSTIC_COLUMNS = ["step", "time", "mu", "energy_rom", "energy_true", "l2_error", "dat"]


def header_lines(header: Dict[str, object]) -> str:
    lines = []
    for key, value in header.items():
        text = str(value)
        if "\n" in text or "=" in str(key):
            raise ValueError(f"Header entry '{key}' cannot be written on one line")
        lines.append(f"# {key}={text}\n")
    return "".join(lines)


def frame_to_csv_text(frame: pd.DataFrame, header: Dict[str, object]) -> str:
    """Deterministic CSV text of a frame, prefixed with provenance lines."""
    body = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return header_lines(header) + body


def write_frame_csv(path: str, frame: pd.DataFrame, header: Dict[str, object]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(frame_to_csv_text(frame, header))
    logger.debug(f"Wrote {len(frame)} rows to {path}")


def split_header(text: str) -> Tuple[Dict[str, str], str]:
    header: Dict[str, str] = {}
    lines = text.splitlines(keepends=True)
    body_start = 0
    for line in lines:
        if not line.startswith("#"):
            break
        key, _, value = line[1:].strip().partition("=")
        header[key.strip()] = value
        body_start += 1
    return header, "".join(lines[body_start:])


def validate_diagnostics(frame: pd.DataFrame, required: Iterable[str] = DIAGNOSTIC_COLUMNS) -> pd.DataFrame:
    """
    Checks that `frame` follows the diagnostics schema.

    Raises
    ------
    SchemaError
        Naming the first missing or non-numeric column.
    """
    for column in required:
        if column not in frame.columns:
            raise SchemaError(f"Diagnostics are missing column '{column}'", column)
        if not pd.api.types.is_numeric_dtype(frame[column]):
            raise SchemaError(f"Diagnostics column '{column}' is not numeric", column)
    if "step" in required and len(frame) and not np.all(np.diff(frame["step"].to_numpy()) > 0):
        raise SchemaError("Diagnostics column 'step' is not strictly increasing", "step")
    return frame


def read_diagnostics_csv(path: str) -> Tuple[pd.DataFrame, Dict[str, str]]:
    """
    Reads a diagnostics CSV.

    Returns
    -------
    tuple
        The validated frame and the provenance header.

    Raises
    ------
    SchemaError
        When the table is malformed or lacks a diagnostics column.
    """
    with open(path, "r", encoding="utf-8") as f:
        header, body = split_header(f.read())
    try:
        frame = pd.read_csv(io.StringIO(body), float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SchemaError(f"'{path}' is not a diagnostics table: {e}", DIAGNOSTIC_COLUMNS[0])
    return validate_diagnostics(frame), header
