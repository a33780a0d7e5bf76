# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
import os
import re
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import List

import pandas as pd

from nudgerom.rom.runner import RunResult
from nudgerom.storage.diagnostics_file import FLOAT_FORMAT
from nudgerom.storage.diagnostics_file import header_lines
from nudgerom.storage.diagnostics_file import write_frame_csv

logger = logging.getLogger(__name__)


def _file_label(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label)


@dataclass(frozen=True, eq=False)
class Report:
    """
    A summary table plus the diagnostics of the runs behind it.

    Attributes
    ----------
    name : str
        File stem of the written report.
    table : pd.DataFrame
    header : dict
        `# key=value` provenance lines written in front of every output.
    runs : dict
        Label -> RunResult; each is written as `<name>_<label>.csv`.
    """

    name: str
    table: pd.DataFrame
    header: Dict[str, object]
    runs: Dict[str, RunResult] = field(default_factory=dict)

    def to_markdown(self) -> str:
        return header_lines(self.header) + "\n" + self.table.to_markdown(index=False, floatfmt=".6e") + "\n"

    def write(self, output_dir: str) -> List[str]:
        """Writes `<name>.md`, `<name>.csv` and one diagnostics CSV per run; returns the paths."""
        os.makedirs(output_dir, exist_ok=True)
        markdown_path = os.path.join(output_dir, f"{self.name}.md")
        with open(markdown_path, "w", encoding="utf-8", newline="") as f:
            f.write(self.to_markdown())
        csv_path = os.path.join(output_dir, f"{self.name}.csv")
        write_frame_csv(csv_path, self.table, self.header)

        paths = [markdown_path, csv_path]
        for label, result in self.runs.items():
            run_path = os.path.join(output_dir, f"{self.name}_{_file_label(label)}.csv")
            result.to_csv(run_path)
            paths.append(run_path)
        logger.info(f"Wrote report '{self.name}' ({len(self.runs)} runs) to {output_dir}")
        return paths

    @property
    def run_paths(self) -> Dict[str, str]:
        """Relative file names of the run CSVs, in run order."""
        return {label: f"{self.name}_{_file_label(label)}.csv" for label in self.runs}


def format_float_list(values) -> str:
    return ",".join(FLOAT_FORMAT % float(v) for v in values)
