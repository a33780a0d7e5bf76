# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import math

import numpy as np
import pytest

from nudgerom.dns.initial_conditions import random_seeded_field
from nudgerom.fields.grid import Grid
from nudgerom.fields.operators import norm_l2
from nudgerom.fields.velocity import VelocityField
from nudgerom.observation.coarse_mesh import CoarseMesh
from nudgerom.observation.coarse_mesh import interpolate
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import DimensionError


@pytest.fixture
def grid():
    return Grid(nx=16, ny=16)


@pytest.mark.parametrize("cells, block", [(16, (1, 1)), (8, (2, 2)), (4, (4, 4)), (1, (16, 16))])
def test_mesh_geometry(grid, cells, block):
    mesh = CoarseMesh.with_cells(grid, cells)
    assert mesh.block == block
    assert mesh.cell_shape == (cells, cells)
    assert mesh.cell_area == pytest.approx((2.0 * math.pi / cells) ** 2)


@pytest.mark.parametrize("H", [2.0 * math.pi / 3.0, 2.0 * math.pi / 16.0 * 1.5, 0.0])
def test_mesh_must_nest(grid, H):
    with pytest.raises(ConfigurationError):
        CoarseMesh(grid, H)


def test_mesh_must_tile(grid):
    with pytest.raises(ConfigurationError, match="tile"):
        CoarseMesh(grid, 3.0 * grid.hx)


def test_interpolate_is_cell_mean(grid):
    mesh = CoarseMesh.with_cells(grid, 8)
    constant = VelocityField(np.full(grid.shape, 2.0), np.full(grid.shape, -1.0), grid)
    coarse = interpolate(mesh, constant)
    np.testing.assert_allclose(coarse.values[0], 2.0)
    np.testing.assert_allclose(coarse.values[1], -1.0)
    np.testing.assert_allclose(coarse.lift().stacked(), constant.stacked())


def test_interpolate_at_grid_resolution_is_identity(grid):
    w = random_seeded_field(grid, 5)
    coarse = interpolate(CoarseMesh(grid, grid.hx), w)
    np.testing.assert_allclose(coarse.lift().stacked(), w.stacked(), atol=1e-14)


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("cells", [1, 4, 8])
def test_interpolate_is_a_contraction(grid, seed, cells):
    w = random_seeded_field(grid, seed)
    coarse = interpolate(CoarseMesh.with_cells(grid, cells), w)
    assert coarse.norm_l2 <= norm_l2(w) + 1e-12
    assert coarse.norm_l2 == pytest.approx(norm_l2(coarse.lift()), rel=1e-12)


def test_interpolate_rejects_other_grid(grid):
    mesh = CoarseMesh.with_cells(grid, 4)
    with pytest.raises(DimensionError):
        interpolate(mesh, VelocityField.zeros(Grid(nx=8, ny=8)))
