# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from nudgerom.fields.grid import Grid
from nudgerom.fields.velocity import VelocityField
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import DimensionError

logger = logging.getLogger(__name__)

NESTING_TOL = 1e-9


def _nodes_per_cell(H: float, h: float, n: int, axis: str) -> int:
    ratio = H / h
    nodes = int(round(ratio))
    if nodes < 1 or abs(ratio - nodes) > NESTING_TOL * max(1.0, ratio):
        raise ConfigurationError(f"H={H} is not an integer multiple of h{axis}={h}")
    if n % nodes != 0:
        raise ConfigurationError(f"Coarse cells of width H={H} do not tile the {n} {axis}-nodes of the grid")
    return nodes


@dataclass(frozen=True)
class CoarseMesh:
    """
    Partition of a periodic grid into square cells of width H, each an aligned block of fine-grid nodes.

    Raises
    ------
    ConfigurationError
        If H is not an integer multiple of both grid spacings or the cells do not tile the domain.
    """

    grid: Grid
    H: float

    def __post_init__(self):
        if not self.H > 0.0:
            raise ConfigurationError(f"H must be strictly positive, got {self.H}")
        mx = _nodes_per_cell(self.H, self.grid.hx, self.grid.nx, "x")
        my = _nodes_per_cell(self.H, self.grid.hy, self.grid.ny, "y")
        object.__setattr__(self, "_block", (mx, my))

    @classmethod
    def with_cells(cls, grid: Grid, cells: int) -> "CoarseMesh":
        """A mesh with `cells` coarse cells along x."""
        return cls(grid, grid.lx / cells)

    @property
    def block(self) -> Tuple[int, int]:
        """Fine nodes per coarse cell along x and y."""
        return self._block

    @property
    def cell_shape(self) -> Tuple[int, int]:
        mx, my = self.block
        return (self.grid.nx // mx, self.grid.ny // my)

    @property
    def cell_count(self) -> int:
        cx, cy = self.cell_shape
        return cx * cy

    @property
    def cell_area(self) -> float:
        mx, my = self.block
        return mx * my * self.grid.weight

    def cell_means_array(self, values: np.ndarray) -> np.ndarray:
        """Cell means of stacked nodal arrays, (..., nx, ny) -> (..., cx, cy)."""
        if values.shape[-2:] != self.grid.shape:
            raise DimensionError(f"Array of shape {values.shape} does not live on grid {self.grid.shape}")
        (cx, cy), (mx, my) = self.cell_shape, self.block
        blocks = values.reshape(values.shape[:-2] + (cx, mx, cy, my))
        return blocks.mean(axis=(-3, -1))

    def lift_array(self, cell_values: np.ndarray) -> np.ndarray:
        """Piecewise-constant nodal extension, (..., cx, cy) -> (..., nx, ny)."""
        if cell_values.shape[-2:] != self.cell_shape:
            raise DimensionError(f"Cell array of shape {cell_values.shape} does not match mesh {self.cell_shape}")
        mx, my = self.block
        return np.repeat(np.repeat(cell_values, mx, axis=-2), my, axis=-1)


@dataclass(frozen=True, eq=False)
class CoarseField:
    """Two-component cell means on a CoarseMesh, shape (2, cx, cy)."""

    values: np.ndarray
    mesh: CoarseMesh

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.shape != (2,) + self.mesh.cell_shape:
            raise DimensionError(f"Expected cell values of shape {(2,) + self.mesh.cell_shape}, got {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def lift(self) -> VelocityField:
        return VelocityField.from_stacked(self.mesh.lift_array(self.values), self.mesh.grid)

    @property
    def norm_l2(self) -> float:
        """L2 norm of the lift, from the cell values alone."""
        return float(np.sqrt(self.mesh.cell_area * np.sum(self.values**2)))


def interpolate(mesh: CoarseMesh, v: VelocityField) -> CoarseField:
    """
    The observation operator I_H: L2 projection onto piecewise constants, i.e. the quadrature mean of each cell.

    Raises
    ------
    DimensionError
        If `v` does not live on the mesh's grid.
    """
    mesh.grid.require_same(v.grid)
    return CoarseField(mesh.cell_means_array(v.stacked()), mesh)
