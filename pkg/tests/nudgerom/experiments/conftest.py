# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pandas as pd
import pytest

from nudgerom.experiments.pipeline import prepare_artifacts
from nudgerom.schemas.experiment_config_schema import validate_experiment_config
from nudgerom.storage.diagnostics_file import DIAGNOSTIC_COLUMNS
from nudgerom.storage.diagnostics_file import write_frame_csv


def tiny_experiment_document():
    return {
        "dns": {
            "grid": {"nx": 16, "ny": 16},
            "nu": 0.05,
            "dt": 0.05,
            "t_end": 1.5,
            "initial_condition": {"type": "random_seeded", "params": {"seed": 7}},
            "forcing": {"type": "kolmogorov", "params": {"amplitude": 1.0, "wavenumber": 1}},
            "spinup": {"type": "fixed", "params": {"t_start": 0.5}},
        },
        "observation": {"cells": 4},
        "pod": {"period": 1.0},
        "darom": {"r": 4, "mu0": 10.0, "dt": 0.1, "t_end": 0.5},
        "experiment": {"r_list": [1, 2, 3], "mu_list": [0.0, 10.0], "window_fractions": [0.5], "workers": 1},
    }


@pytest.fixture(scope="module")
def tiny_config():
    return validate_experiment_config(tiny_experiment_document())


@pytest.fixture(scope="module")
def artifacts(tiny_config):
    return prepare_artifacts(tiny_config, window_fractions=[0.5])


def write_diagnostics(path, mu=None, l2_error=None, adaptive=False, rows=5):
    frame = pd.DataFrame(
        {
            "step": np.arange(rows),
            "time": 0.1 * np.arange(rows),
            "mu": np.full(rows, 1.0) if mu is None else np.asarray(mu, dtype=float),
            "energy_rom": np.linspace(0.0, 1.0, rows),
            "energy_true": np.ones(rows),
            "l2_error": np.full(rows, np.nan) if l2_error is None else np.asarray(l2_error, dtype=float),
            "dat": np.zeros(rows),
        },
        columns=DIAGNOSTIC_COLUMNS,
    )
    write_frame_csv(str(path), frame, {"mu": "adaptive" if adaptive else "1.0"})
    return str(path)
