# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pandas as pd
import pytest

from nudgerom.storage.diagnostics_file import DIAGNOSTIC_COLUMNS
from nudgerom.storage.diagnostics_file import frame_to_csv_text
from nudgerom.storage.diagnostics_file import read_diagnostics_csv
from nudgerom.storage.diagnostics_file import split_header
from nudgerom.storage.diagnostics_file import write_frame_csv
from nudgerom.util.exception_handlers.errors import SchemaError


def diagnostics_frame(rows=3):
    return pd.DataFrame(
        {
            "step": np.arange(rows),
            "time": 0.1 * np.arange(rows),
            "mu": np.full(rows, 10.0),
            "energy_rom": 1.0 / 3.0 + np.arange(rows),
            "energy_true": np.ones(rows),
            "l2_error": np.full(rows, np.nan),
            "dat": np.zeros(rows),
        },
        columns=DIAGNOSTIC_COLUMNS,
    )


def test_csv_text_has_header_and_full_precision():
    text = frame_to_csv_text(diagnostics_frame(), {"r": 4, "mu": "adaptive"})
    lines = text.splitlines()
    assert lines[:2] == ["# r=4", "# mu=adaptive"]
    assert lines[2] == ",".join(DIAGNOSTIC_COLUMNS)
    assert "0.33333333333333331" in lines[3]


def test_csv_text_is_deterministic():
    assert frame_to_csv_text(diagnostics_frame(), {"r": 4}) == frame_to_csv_text(diagnostics_frame(), {"r": 4})


def test_header_rejects_multiline_values():
    with pytest.raises(ValueError):
        frame_to_csv_text(diagnostics_frame(), {"note": "two\nlines"})


def test_split_header():
    header, body = split_header("# a=1\n# b=x=y\nstep\n0\n")
    assert header == {"a": "1", "b": "x=y"}
    assert body == "step\n0\n"


def test_read_diagnostics_csv(tmp_path):
    path = str(tmp_path / "run.csv")
    write_frame_csv(path, diagnostics_frame(), {"provenance": "f" * 64})
    frame, header = read_diagnostics_csv(path)
    assert header["provenance"] == "f" * 64
    pd.testing.assert_frame_equal(frame, diagnostics_frame(), check_dtype=False)


@pytest.mark.parametrize("column", ["mu", "dat"])
def test_missing_column_is_named(tmp_path, column):
    path = str(tmp_path / "run.csv")
    write_frame_csv(path, diagnostics_frame().drop(columns=[column]), {})
    with pytest.raises(SchemaError) as exc_info:
        read_diagnostics_csv(path)
    assert exc_info.value.column == column


def test_non_increasing_step_is_rejected(tmp_path):
    path = str(tmp_path / "run.csv")
    frame = diagnostics_frame()
    frame["step"] = [0, 2, 1]
    write_frame_csv(path, frame, {})
    with pytest.raises(SchemaError, match="step"):
        read_diagnostics_csv(path)


def test_read_diagnostics_csv_is_bit_exact(tmp_path):
    frame = diagnostics_frame(rows=64)
    values = np.random.default_rng(11).standard_normal((64, 3)) * np.logspace(-12, 12, 64)[:, None]
    frame["energy_rom"], frame["energy_true"], frame["dat"] = values.T
    path = str(tmp_path / "run.csv")
    write_frame_csv(path, frame, {})
    stored, _ = read_diagnostics_csv(path)
    for column in ("time", "energy_rom", "energy_true", "dat"):
        np.testing.assert_array_equal(stored[column].to_numpy(), frame[column].to_numpy(), err_msg=column)
