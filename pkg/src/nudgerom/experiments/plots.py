# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Figures of diagnostics CSVs: a standalone plotting script plus the SVG it describes.

Both outputs depend only on the CSV contents and the order of the paths, so re-running on the same files gives
byte-identical results.
"""

import inspect
import io
import logging
import os
from dataclasses import dataclass
from enum import Enum
from typing import Callable
from typing import List
from typing import Sequence

import matplotlib
import numpy as np
import pandas as pd
from matplotlib.figure import Figure

from nudgerom.storage.diagnostics_file import read_diagnostics_csv
from nudgerom.storage.diagnostics_file import split_header
from nudgerom.storage.diagnostics_file import validate_diagnostics
from nudgerom.util.exception_handlers.errors import ConfigurationError

logger = logging.getLogger(__name__)

SVG_HASH_SALT = "nudgerom"
RATE_COLUMNS = ["r", "eigentail", "final_error"]

PANEL_LABELS = {"energy": "energy", "error": "L2 error", "mu": "mu", "dat": "DAT"}


class PlotKindEnum(str, Enum):
    darom = "darom"
    mu_sweep = "mu_sweep"
    inaccurate_basis = "inaccurate_basis"
    adaptive_compare = "adaptive_compare"
    rate_table = "rate_table"


@dataclass(frozen=True)
class PlotOutput:
    script_path: str
    figure_path: str
    panels: List[str]


SCRIPT_HEADER = '''"""Redraws {figure_name} from {source}."""

import os

import matplotlib
import pandas as pd
from matplotlib.figure import Figure

CSV_PATHS = {csv_paths!r}
PANELS = {panels!r}
PANEL_LABELS = {panel_labels!r}
SVG_HASH_SALT = {salt!r}
'''

SCRIPT_MAIN = '''

def main():
    frames = [pd.read_csv(path, comment="#", float_precision="round_trip") for path in CSV_PATHS]
    names = [os.path.splitext(os.path.basename(path))[0] for path in CSV_PATHS]
    fig = Figure()
    {draw}(fig, frames, names, PANELS)
    save_svg(fig, {figure_name!r})


if __name__ == "__main__":
    main()
'''


def _is_adaptive(header) -> bool:
    return header.get("mu") == "adaptive"


def select_panels(frames, headers) -> List[str]:
    """Energy always; error when any run has a truth error; mu when mu varies; DAT for adaptive runs."""
    panels = ["energy"]
    if any(np.isfinite(frame["l2_error"].to_numpy()).any() for frame in frames):
        panels.append("error")
    if any(frame["mu"].nunique() > 1 for frame in frames):
        panels.append("mu")
    if any(_is_adaptive(header) for header in headers):
        if "mu" not in panels:
            panels.append("mu")
        panels.append("dat")
    return panels


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def save_svg(fig: Figure, path: str) -> None:
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata={"Date": None})


def draw_timeseries(fig: Figure, frames, names, panels) -> None:
    fig.set_size_inches(7.0, 2.4 * len(panels))
    axes = fig.subplots(len(panels), 1, sharex=True, squeeze=False)[:, 0]
    for frame, name in zip(frames, names):
        for ax, panel in zip(axes, panels):
            if panel == "energy":
                ax.plot(frame["time"], frame["energy_rom"], label=name)
                ax.plot(frame["time"], frame["energy_true"], color="black", linestyle="--", linewidth=0.8)
            elif panel == "error":
                ax.semilogy(frame["time"], frame["l2_error"], label=name)
            else:
                ax.plot(frame["time"], frame[panel], label=name)
    for ax, panel in zip(axes, panels):
        ax.set_ylabel(PANEL_LABELS[panel])
    axes[-1].set_xlabel("time")
    axes[0].legend(fontsize="small")
    fig.tight_layout()


def draw_rates(fig: Figure, frames, names, panels) -> None:
    fig.set_size_inches(5.0, 4.0)
    ax = fig.subplots()
    for frame in frames:
        ax.loglog(frame["eigentail"], frame["final_error"], marker="o")
    ax.set_xlabel("eigenvalue tail")
    ax.set_ylabel("final L2 error")
    fig.tight_layout()


def plot_script(figure_name: str, csv_paths: List[str], panels: List[str], draw: Callable) -> str:
    """Source of a standalone script that redraws the figure with the same drawing code."""
    source = "a rate table CSV" if draw is draw_rates else "diagnostics CSVs"
    header = SCRIPT_HEADER.format(
        figure_name=figure_name,
        source=source,
        csv_paths=csv_paths,
        panels=panels,
        panel_labels=PANEL_LABELS,
        salt=SVG_HASH_SALT,
    )
    functions = "\n\n".join(inspect.getsource(function) for function in (save_svg, draw))
    return header + "\n\n" + functions + SCRIPT_MAIN.format(draw=draw.__name__, figure_name=figure_name)


def _read_rate_csv(path: str) -> pd.DataFrame:
    with open(path, "r", encoding="utf-8") as f:
        _, body = split_header(f.read())
    frame = pd.read_csv(io.StringIO(body), float_precision="round_trip")
    return validate_diagnostics(frame, required=RATE_COLUMNS)


def emit_plots(csv_paths: Sequence[str], kind, output_dir: str) -> PlotOutput:
    """
    Writes `plot_<kind>.py` and `<kind>.svg` to `output_dir`.

    Parameters
    ----------
    csv_paths : sequence of str
        Diagnostics CSVs (a rate table CSV for kind `rate_table`); the script references exactly these.
    kind : PlotKindEnum or str
    output_dir : str

    Returns
    -------
    PlotOutput

    Raises
    ------
    SchemaError
        When a CSV lacks a required column; the error names it.
    ConfigurationError
        When no CSV is given.
    """
    kind = PlotKindEnum(kind)
    csv_paths = [str(path) for path in csv_paths]
    if not csv_paths:
        raise ConfigurationError("emit_plots needs at least one CSV")
    os.makedirs(output_dir, exist_ok=True)
    figure_name = f"{kind.value}.svg"
    figure_path = os.path.join(output_dir, figure_name)
    script_path = os.path.join(output_dir, f"plot_{kind.value}.py")

    if kind == PlotKindEnum.rate_table:
        frames = [_read_rate_csv(path) for path in csv_paths]
        panels = ["rate"]
        draw = draw_rates
    else:
        loaded = [read_diagnostics_csv(path) for path in csv_paths]
        frames = [frame for frame, _ in loaded]
        panels = select_panels(frames, [header for _, header in loaded])
        draw = draw_timeseries

    fig = Figure()
    draw(fig, frames, [_stem(path) for path in csv_paths], panels)
    save_svg(fig, figure_path)
    script = plot_script(figure_name, csv_paths, panels, draw)
    with open(script_path, "w", encoding="utf-8", newline="") as f:
        f.write(script)
    logger.info(f"Wrote {kind.value} plot ({', '.join(panels)}) to {figure_path}")
    return PlotOutput(script_path=script_path, figure_path=figure_path, panels=panels)
