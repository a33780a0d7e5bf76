# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import os

import numpy as np
import pytest

from nudgerom.experiments.sweeps import adaptive_compare_report
from nudgerom.experiments.sweeps import inaccurate_basis_report
from nudgerom.experiments.sweeps import mu_sweep_report
from nudgerom.experiments.sweeps import require_rank
from nudgerom.experiments.sweeps import run_label
from nudgerom.util.exception_handlers.errors import ConfigurationError


def test_run_label():
    assert run_label(10.0) == "mu_10"
    assert run_label(0.5, adaptive=True) == "mu_0.5_adaptive"


def test_require_rank(tiny_config):
    assert require_rank(tiny_config) == 4
    with pytest.raises(ConfigurationError):
        require_rank(tiny_config.copy(update={"darom": tiny_config.darom.copy(update={"r": None})}))


def test_mu_sweep_report(tmp_path, tiny_config, artifacts):
    report = mu_sweep_report(tiny_config, artifacts)
    assert report.table["mu"].tolist() == [0.0, 10.0]
    assert list(report.runs) == ["mu_0", "mu_10"]
    assert report.header["mu_list"] == "0,10"
    assert np.isfinite(report.table["final_error"]).all()

    paths = report.write(str(tmp_path))
    assert [os.path.basename(path) for path in paths] == [
        "mu_sweep.md",
        "mu_sweep.csv",
        "mu_sweep_mu_0.csv",
        "mu_sweep_mu_10.csv",
    ]
    assert report.run_paths == {"mu_0": "mu_sweep_mu_0.csv", "mu_10": "mu_sweep_mu_10.csv"}


def test_reports_are_byte_identical(tmp_path, tiny_config, artifacts):
    first = mu_sweep_report(tiny_config, artifacts).write(str(tmp_path / "a"))
    second = mu_sweep_report(tiny_config, artifacts).write(str(tmp_path / "b"))
    for a, b in zip(first, second):
        with open(a, "rb") as fa, open(b, "rb") as fb:
            assert fa.read() == fb.read(), os.path.basename(a)


def test_inaccurate_basis_report_always_runs_mu_zero(tiny_config, artifacts):
    experiment = tiny_config.experiment.copy(update={"mu_list": [10.0]})
    report = inaccurate_basis_report(tiny_config.copy(update={"experiment": experiment}), artifacts)
    table = report.table
    assert table["window_fraction"].tolist() == [0.5, 0.5]
    assert table["mu"].tolist() == [0.0, 10.0]
    assert table.loc[table["mu"] == 0.0, "ratio_to_mu0"].iloc[0] == pytest.approx(1.0)
    assert report.header["basis_0.5"] == artifacts.bases[0.5].provenance
    assert list(report.runs) == ["w0.5_mu_0", "w0.5_mu_10"]


def test_adaptive_compare_report(tiny_config, artifacts):
    report = adaptive_compare_report(tiny_config, artifacts)
    table = report.table
    assert table["adaptive"].tolist() == [False, False, True]
    assert (table["mu_changes"].iloc[:2] == 0).all()
    assert list(report.runs)[-1] == "mu_10_adaptive"
    assert report.runs["mu_10_adaptive"].header["mu"] == "adaptive"
