# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from dataclasses import dataclass

import numpy as np

from nudgerom.fields.grid import Grid
from nudgerom.pod.basis import PodBasis
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import DimensionError
from nudgerom.util.exception_handlers.errors import PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TruthReference:
    """
    Enough of the truth trajectory to evaluate ROM errors exactly, without storing truth fields.

    For an orthonormal basis, ||u - sum_j a_j phi_j||^2 = ||u||^2 - 2 a . c + ||a||^2 with c_j = (u, phi_j).

    Attributes
    ----------
    times : np.ndarray
        DA-ROM times, shape (N,).
    norms_sq : np.ndarray
        ||u(t^n)||^2, shape (N,).
    coefficients : np.ndarray
        (u(t^n), phi_j) against every mode of the basis, shape (N, d).
    basis_provenance : str
        Provenance hash of the basis the coefficients refer to.
    """

    times: np.ndarray
    norms_sq: np.ndarray
    coefficients: np.ndarray
    basis_provenance: str

    def __post_init__(self):
        n = np.asarray(self.times).shape[0]
        if np.asarray(self.norms_sq).shape != (n,) or np.asarray(self.coefficients).shape[0] != n:
            raise DimensionError("Truth reference arrays disagree on the number of times")

    @classmethod
    def from_arrays(cls, times, values: np.ndarray, basis: PodBasis) -> "TruthReference":
        """Builds the reference from stacked truth fields of shape (N, 2, nx, ny)."""
        grid: Grid = basis.grid
        if basis.centered:
            raise PreconditionError("Truth references require an uncentered basis")
        values = np.asarray(values, dtype=np.float64)
        if values.shape[1:] != (2,) + grid.shape:
            raise DimensionError(f"Truth fields of shape {values.shape} do not live on grid {grid.shape}")
        flat = values.reshape(values.shape[0], -1)
        norms_sq = grid.weight * np.sum(flat**2, axis=1)
        coefficients = grid.weight * flat @ basis.mode_array.reshape(basis.d, -1).T
        return cls(
            times=np.asarray(times, dtype=np.float64),
            norms_sq=norms_sq,
            coefficients=coefficients,
            basis_provenance=basis.provenance,
        )

    @property
    def count(self) -> int:
        return int(self.times.shape[0])

    @property
    def energies(self) -> np.ndarray:
        return 0.5 * self.norms_sq

    def error_sq(self, index: int, a: np.ndarray) -> float:
        """||u(t^index) - u_r||^2 for ROM coefficients `a` (length r <= d)."""
        c = self.coefficients[index, : a.shape[0]]
        value = self.norms_sq[index] - 2.0 * float(np.dot(a, c)) + float(np.dot(a, a))
        return max(value, 0.0)

    def projection(self, index: int, r: int) -> np.ndarray:
        """Coefficients of P_r u(t^index)."""
        return np.array(self.coefficients[index, :r])

    def require_basis(self, basis_provenance: str) -> None:
        if basis_provenance != self.basis_provenance:
            raise PreconditionError("Truth reference was computed against a different basis")

    def require_steps(self, dt: float, n_steps: int) -> np.ndarray:
        """Indices of the entries at DA times 0, dt, ..., n_steps dt."""
        scale = max(1.0, n_steps * dt)
        indices = []
        for n in range(n_steps + 1):
            index = int(np.argmin(np.abs(self.times - n * dt))) if self.count else -1
            if index < 0 or abs(self.times[index] - n * dt) > 1e-9 * scale:
                raise ConfigurationError(f"Truth reference has no entry at DA time {n * dt:.12g}")
            indices.append(index)
        return np.asarray(indices, dtype=np.int64)
