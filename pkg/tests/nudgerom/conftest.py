# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pytest

from nudgerom.dns.initial_conditions import random_seeded_field
from nudgerom.dns.snapshots import SnapshotSet
from nudgerom.fields.grid import Grid
from nudgerom.pod.basis import build_pod
from nudgerom.util.converters.provenance import provenance_hash


def make_snapshots(grid: Grid, count: int = 8, dt: float = 0.1, t0: float = 0.0, seed: int = 3) -> SnapshotSet:
    """Independent seeded random fields at t0, t0 + dt, ...; a full-rank snapshot set."""
    values = np.stack([random_seeded_field(grid, seed + k, energy=0.5 + 0.1 * k).stacked() for k in range(count)])
    return SnapshotSet(
        times=t0 + dt * np.arange(count),
        values=values,
        grid=grid,
        provenance=provenance_hash({"test_snapshots": seed, "count": count}),
    )


@pytest.fixture
def small_grid():
    return Grid(nx=16, ny=16)


@pytest.fixture
def snapshots(small_grid):
    return make_snapshots(small_grid)


@pytest.fixture
def basis(snapshots):
    return build_pod(snapshots)
