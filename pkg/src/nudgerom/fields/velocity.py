# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


from dataclasses import dataclass
from typing import Callable
from typing import Tuple

import numpy as np

from nudgerom.fields.grid import Grid
from nudgerom.util.exception_handlers.errors import DimensionError


def _frozen_copy(values, shape: Tuple[int, ...]) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    if array.shape != shape:
        raise DimensionError(f"Expected array of shape {shape}, got {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class VelocityField:
    """
    Two-component nodal velocity on a periodic grid. Immutable: the component arrays are read-only.

    Attributes
    ----------
    u1, u2 : np.ndarray
        Components of shape (nx, ny).
    grid : Grid
    """

    u1: np.ndarray
    u2: np.ndarray
    grid: Grid

    def __post_init__(self):
        object.__setattr__(self, "u1", _frozen_copy(self.u1, self.grid.shape))
        object.__setattr__(self, "u2", _frozen_copy(self.u2, self.grid.shape))

    @classmethod
    def zeros(cls, grid: Grid) -> "VelocityField":
        return cls(np.zeros(grid.shape), np.zeros(grid.shape), grid)

    @classmethod
    def from_stacked(cls, values: np.ndarray, grid: Grid) -> "VelocityField":
        """Builds a field from an array of shape (2, nx, ny)."""
        values = np.asarray(values)
        if values.shape != (2,) + grid.shape:
            raise DimensionError(f"Expected array of shape {(2,) + grid.shape}, got {values.shape}")
        return cls(values[0], values[1], grid)

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[[np.ndarray, np.ndarray], Tuple]) -> "VelocityField":
        """Samples `func(x, y) -> (u1, u2)` at the grid nodes."""
        x, y = grid.coordinates
        u1, u2 = func(x, y)
        return cls(np.broadcast_to(u1, grid.shape), np.broadcast_to(u2, grid.shape), grid)

    def stacked(self) -> np.ndarray:
        """Components as a new array of shape (2, nx, ny)."""
        return np.stack([self.u1, self.u2])

    def spectral(self) -> np.ndarray:
        return self.grid.to_spectral(self.stacked())

    @classmethod
    def from_spectral(cls, coefficients: np.ndarray, grid: Grid) -> "VelocityField":
        return cls.from_stacked(grid.to_physical(coefficients), grid)

    def require_grid(self, other) -> None:
        self.grid.require_same(other.grid)

    def __add__(self, other: "VelocityField") -> "VelocityField":
        self.require_grid(other)
        return VelocityField(self.u1 + other.u1, self.u2 + other.u2, self.grid)

    def __sub__(self, other: "VelocityField") -> "VelocityField":
        self.require_grid(other)
        return VelocityField(self.u1 - other.u1, self.u2 - other.u2, self.grid)

    def __mul__(self, scalar: float) -> "VelocityField":
        return VelocityField(scalar * self.u1, scalar * self.u2, self.grid)

    __rmul__ = __mul__

    def __neg__(self) -> "VelocityField":
        return self * -1.0

    def max_speed(self) -> float:
        return float(np.sqrt(np.max(self.u1**2 + self.u2**2)))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.u1)) and np.all(np.isfinite(self.u2)))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Zero-mean nodal scalar (pressure-like) on a periodic grid."""

    p: np.ndarray
    grid: Grid

    def __post_init__(self):
        values = np.array(self.p, dtype=np.float64, copy=True)
        if values.shape != self.grid.shape:
            raise DimensionError(f"Expected array of shape {self.grid.shape}, got {values.shape}")
        values -= values.mean()
        values.setflags(write=False)
        object.__setattr__(self, "p", values)

    @classmethod
    def from_array(cls, values: np.ndarray, grid: Grid) -> "ScalarField":
        """Builds a field from nodal values; the mean is subtracted."""
        return cls(values, grid)


@dataclass(frozen=True, eq=False)
class TensorField:
    """
    Velocity gradient on a periodic grid.

    `components[i, j]` holds the nodal values of du_i/dx_j, shape (2, 2, nx, ny).
    """

    components: np.ndarray
    grid: Grid

    def __post_init__(self):
        object.__setattr__(self, "components", _frozen_copy(self.components, (2, 2) + self.grid.shape))

    def __getitem__(self, index) -> np.ndarray:
        return self.components[index]
