# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import json
import os

import pytest

from nudgerom.experiments.pipeline import prepare_artifacts
from nudgerom.schemas.experiment_config_schema import validate_experiment_config

DESK_CONFIG = os.path.join(os.path.dirname(__file__), "..", "..", "config", "kolmogorov_desk.json")


def pytest_collection_modifyitems(config, items):
    if os.getenv("NUDGEROM_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set NUDGEROM_RUN_SLOW=1 to run the desk-scale acceptance runs")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def desk_config(**sections):
    """The desk-scale Kolmogorov configuration with whole sections merged in."""
    with open(DESK_CONFIG, "r") as f:
        document = json.load(f)
    for name, update in sections.items():
        document[name] = {**document[name], **update}
    return validate_experiment_config(document)


@pytest.fixture(scope="session")
def desk_artifacts():
    config = desk_config()
    return prepare_artifacts(config, window_fractions=config.experiment.window_fractions)


def snapshot_span(config) -> float:
    return config.dns.t_end - config.dns.spinup.params.t_start


@pytest.fixture(scope="session")
def long_horizon_artifacts():
    """Truth and observations over ten snapshot windows, so nudged runs can cover the whole long horizon."""
    base = desk_config()
    return prepare_artifacts(desk_config(darom={"t_end": 10.0 * snapshot_span(base)}))
