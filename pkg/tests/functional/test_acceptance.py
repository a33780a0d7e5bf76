# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Desk-scale acceptance runs on the Kolmogorov configuration in config/kolmogorov_desk.json.

The thresholds are those of the full-scale runs (128^2 grid, H = L/20), applied here to a 64^2 grid with
H = L/16 so that each run finishes in minutes. L/20 does not tile 64 nodes; L/16 is the nearest width that does.
"""

import numpy as np
import pytest

from nudgerom.experiments.rate_table import rate_table
from nudgerom.experiments.sweeps import adaptive_compare_report
from nudgerom.experiments.sweeps import inaccurate_basis_report
from nudgerom.experiments.sweeps import mu_sweep_report
from nudgerom.rom.runner import galerkin_rom
from nudgerom.rom.runner import run

from .conftest import desk_config
from .conftest import snapshot_span

pytestmark = pytest.mark.slow


def test_nudged_error_decays_then_plateaus(desk_artifacts):
    config = desk_config(experiment={"mu_list": [0.0, 100.0]})
    report = mu_sweep_report(config, desk_artifacts)
    free, nudged = report.runs["mu0"], report.runs["mu100"]

    errors = nudged.diagnostics["l2_error"].to_numpy()
    plateau = np.median(errors[len(errors) // 2 :])
    decay = np.flatnonzero(errors > 2.0 * plateau)
    assert decay.size >= 3, "the nudged error has no decay phase above its plateau"
    window = slice(1, decay[-1] + 1)
    t, log_e = nudged.diagnostics["time"].to_numpy()[window], np.log(errors[window])
    slope, intercept = np.polyfit(t, log_e, 1)
    residual = log_e - (slope * t + intercept)
    r_squared = 1.0 - np.sum(residual**2) / np.sum((log_e - log_e.mean()) ** 2)
    assert slope < 0.0
    assert r_squared >= 0.9

    free_late = np.median(free.diagnostics["l2_error"].to_numpy()[len(errors) // 2 :])
    assert free_late >= 5.0 * plateau


def test_truncation_rate_table(desk_artifacts):
    table = rate_table(desk_config(darom={"t_end": 5.0}), desk_artifacts)
    assert table.complete
    rates = table.rates
    assert np.all((rates >= 0.8) & (rates <= 2.6)), rates
    assert 0.9 <= table.mean_rate <= 2.0


def test_inaccurate_basis_benefits_from_nudging(desk_artifacts):
    config = desk_config(experiment={"mu_list": [100.0, 300.0, 500.0]})
    table = inaccurate_basis_report(config, desk_artifacts).table
    for fraction in (0.64, 0.84):
        rows = table[table["window_fraction"] == fraction]
        free = rows.loc[rows["mu"] == 0.0, "time_averaged_energy_error"].item()
        best = rows.loc[rows["mu"] > 0.0, "time_averaged_energy_error"].min()
        assert best <= 0.5 * free, f"window fraction {fraction}"


def test_adaptive_nudging_competes_with_the_best_constant_mu(desk_artifacts):
    config = desk_config(darom={"mu0": 10.0}, experiment={"mu_list": [0.0, 10.0, 100.0]})
    table = adaptive_compare_report(config, desk_artifacts).table
    constant, adaptive = table[~table["adaptive"]], table[table["adaptive"]].iloc[0]
    error = "time_averaged_relative_energy_error"
    assert adaptive[error] <= 1.25 * constant[error].min()
    assert adaptive[error] < constant.loc[constant["mu0"] == 0.0, error].item()
    assert adaptive["mu_changes"] >= 1


@pytest.mark.parametrize("mu", [0.0, 100.0, 500.0])
def test_long_runs_stay_bounded(long_horizon_artifacts, mu):
    config = long_horizon_artifacts.config
    horizon = 10.0 * snapshot_span(config)
    darom = config.darom.copy(update={"mu0": mu, "adaptive": None})
    ops = long_horizon_artifacts.operators(darom.r)
    result = run(ops, darom, long_horizon_artifacts.stream, long_horizon_artifacts.truth)

    times = result.diagnostics["time"].to_numpy()
    assert times[-1] == pytest.approx(horizon), "the run covers ten snapshot windows"
    truth_max_norm = np.sqrt(long_horizon_artifacts.truth.norms_sq.max())
    assert np.isfinite(result.diagnostics["energy_rom"]).all()
    assert result.max_norm <= 10.0 * truth_max_norm



def test_mu_zero_matches_galerkin_rom(desk_artifacts):
    config = desk_config(darom={"mu0": 0.0, "adaptive": None})
    ops = desk_artifacts.operators(config.darom.r)
    nudged = run(ops, config.darom, desk_artifacts.stream, desk_artifacts.truth)
    plain = galerkin_rom(ops, config.darom, desk_artifacts.truth)
    np.testing.assert_array_equal(nudged.diagnostics["energy_rom"], plain.diagnostics["energy_rom"])
    assert nudged.csv_text() == run(ops, config.darom, desk_artifacts.stream, desk_artifacts.truth).csv_text()
