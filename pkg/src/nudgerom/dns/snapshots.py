# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


from dataclasses import dataclass
from typing import List

import numpy as np

from nudgerom.fields.grid import Grid
from nudgerom.fields.operators import inner_l2_array
from nudgerom.fields.velocity import VelocityField
from nudgerom.util.exception_handlers.errors import DimensionError
from nudgerom.util.exception_handlers.errors import PreconditionError


@dataclass(frozen=True, eq=False)
class SnapshotSet:
    """
    Velocity snapshots of a truth trajectory.

    Attributes
    ----------
    times : np.ndarray
        Strictly increasing sample times, shape (M,).
    values : np.ndarray
        Stacked fields, shape (M, 2, nx, ny), physical space.
    grid : Grid
    provenance : str
        sha256 hex digest of the configuration (and derivation) that produced the set.
    """

    times: np.ndarray
    values: np.ndarray
    grid: Grid
    provenance: str

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64, copy=True)
        values = np.array(self.values, dtype=np.float64, copy=True)
        if times.ndim != 1 or values.shape != (times.size, 2) + self.grid.shape:
            raise DimensionError(
                f"Snapshot values of shape {values.shape} do not match {times.size} times on grid {self.grid.shape}"
            )
        if times.size < 2:
            raise PreconditionError(f"A snapshot set needs at least 2 snapshots, got {times.size}")
        if np.any(np.diff(times) <= 0.0):
            raise PreconditionError("Snapshot times must be strictly increasing")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def count(self) -> int:
        return int(self.times.size)

    def field(self, index: int) -> VelocityField:
        return VelocityField.from_stacked(self.values[index], self.grid)

    @property
    def fields(self) -> List[VelocityField]:
        return [self.field(index) for index in range(self.count)]

    def energies(self) -> np.ndarray:
        """Kinetic energy 1/2 ||u||^2 of every snapshot."""
        return 0.5 * inner_l2_array(self.values, self.values, self.grid)

    def subset(self, indices, provenance: str) -> "SnapshotSet":
        indices = np.asarray(indices)
        return SnapshotSet(self.times[indices], self.values[indices], self.grid, provenance)
