# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pytest

from nudgerom.observation.coarse_mesh import CoarseMesh
from nudgerom.observation.stream import build_observation_stream
from nudgerom.observation.stream import truth_reference_from_snapshots
from nudgerom.rom.operators import RomOperators
from nudgerom.rom.operators import assemble
from nudgerom.schemas.da_config_schema import DaConfigSchema


def toy_operators(S=None, T=None, f_vec=None, nu=1.0, H=0.1) -> RomOperators:
    """Two-mode operators with G = I: mode j is observed as a unit cell mean in velocity component j."""
    coarse_modes = np.zeros((2, 2, 1, 1))
    coarse_modes[0, 0, 0, 0] = 1.0
    coarse_modes[1, 1, 0, 0] = 1.0
    return RomOperators(
        r=2,
        S=np.diag([1.0, 4.0]) if S is None else np.asarray(S, dtype=float),
        T=np.zeros((2, 2, 2)) if T is None else np.asarray(T, dtype=float),
        G=np.eye(2),
        f_vec=np.zeros(2) if f_vec is None else np.asarray(f_vec, dtype=float),
        coarse_modes=coarse_modes,
        nu=nu,
        H=H,
        cell_area=1.0,
        basis_provenance="a" * 64,
        provenance="b" * 64,
    )


def da_config(**overrides) -> DaConfigSchema:
    document = {"dt": 0.1, "t_end": 0.7, "stepper": "bdf2"}
    document.update(overrides)
    return DaConfigSchema(**document)


@pytest.fixture
def da_times(snapshots):
    return snapshots.times - snapshots.times[0]


@pytest.fixture
def mesh(small_grid):
    return CoarseMesh.with_cells(small_grid, 4)


@pytest.fixture
def ops(basis, mesh):
    return assemble(basis, 4, mesh, nu=0.1)


@pytest.fixture
def stream(snapshots, mesh, da_times):
    return build_observation_stream(snapshots, mesh, da_times)


@pytest.fixture
def truth(snapshots, basis, da_times):
    return truth_reference_from_snapshots(snapshots, basis, da_times)
