# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pytest

from nudgerom.fields.grid import Grid
from nudgerom.fields.velocity import VelocityField


@pytest.fixture
def grid():
    return Grid(nx=16, ny=16)


@pytest.fixture
def shear(grid):
    return VelocityField.from_function(grid, lambda x, y: (np.sin(y), np.zeros_like(x)))


@pytest.fixture
def taylor_green(grid):
    return VelocityField.from_function(grid, lambda x, y: (np.sin(x) * np.cos(y), -np.cos(x) * np.sin(y)))
