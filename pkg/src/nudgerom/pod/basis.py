# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Proper orthogonal decomposition by the method of snapshots.

The weighted Gram matrix K_mn = w (u^m, u^n) is NOT divided by the number of snapshots, so the eigenvalues add up
to the total squared norm of the snapshots and the rank-r projection error summed over all snapshots equals the
eigenvalue tail sum.
"""

import logging
from dataclasses import dataclass
from typing import List
from typing import Optional

import numpy as np
import scipy.linalg

from nudgerom.dns.snapshots import SnapshotSet
from nudgerom.fields.grid import Grid
from nudgerom.fields.operators import gradient_array
from nudgerom.fields.velocity import VelocityField
from nudgerom.util.converters.provenance import derive_hash
from nudgerom.util.exception_handlers.errors import ConditioningError
from nudgerom.util.exception_handlers.errors import DimensionError
from nudgerom.util.exception_handlers.errors import EmptyBasisError
from nudgerom.util.exception_handlers.errors import OutOfRangeError
from nudgerom.util.tracing.latency import latency_logger

logger = logging.getLogger(__name__)

DEFAULT_RANK_TOL = 1e-12
PSD_TOL = 1e-12
SIGN_TOL = 1e-8
NORMALIZATION_UNSCALED = 0


@dataclass(frozen=True, eq=False)
class PodBasis:
    """
    Ordered POD eigenpairs.

    Attributes
    ----------
    mode_array : np.ndarray
        L2-orthonormal modes, shape (d, 2, nx, ny).
    eigenvalues : np.ndarray
        lambda_1 >= ... >= lambda_d > 0.
    grad_norms : np.ndarray
        ||grad phi_j||^2 per mode.
    stiffness : np.ndarray
        Full d x d stiffness matrix S_ij = (grad phi_j, grad phi_i).
    grid : Grid
    total_energy : float
        Trace of the Gram matrix; the sum of all eigenvalues, including the discarded ones.
    snapshot_count : int
    mean : np.ndarray or None
        Snapshot mean, shape (2, nx, ny), for centered bases.
    provenance : str
    """

    mode_array: np.ndarray
    eigenvalues: np.ndarray
    grad_norms: np.ndarray
    stiffness: np.ndarray
    grid: Grid
    total_energy: float
    snapshot_count: int
    mean: Optional[np.ndarray]
    provenance: str
    normalization: int = NORMALIZATION_UNSCALED

    def __post_init__(self):
        d = self.eigenvalues.shape[0]
        if self.mode_array.shape != (d, 2) + self.grid.shape:
            raise DimensionError(f"Mode array of shape {self.mode_array.shape} does not match {d} modes")
        for array in (self.mode_array, self.eigenvalues, self.grad_norms, self.stiffness):
            array.setflags(write=False)

    @property
    def d(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def centered(self) -> bool:
        return self.mean is not None

    def mode(self, j: int) -> VelocityField:
        """The j-th mode, zero-based."""
        return VelocityField.from_stacked(self.mode_array[j], self.grid)

    @property
    def modes(self) -> List[VelocityField]:
        return [self.mode(j) for j in range(self.d)]

    def require_rank(self, r: int, allow_zero: bool = False) -> None:
        lower = 0 if allow_zero else 1
        if not lower <= r <= self.d:
            raise OutOfRangeError(f"r={r} outside [{lower}, {self.d}]")


@dataclass(frozen=True, eq=False)
class Projection:
    coefficients: np.ndarray
    field: VelocityField


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Makes the first entry of each column that is not negligible positive."""
    for j in range(vectors.shape[1]):
        column = vectors[:, j]
        significant = np.flatnonzero(np.abs(column) > SIGN_TOL * np.max(np.abs(column)))
        if significant.size and column[significant[0]] < 0.0:
            vectors[:, j] = -column
    return vectors


def _stiffness(mode_array: np.ndarray, grid: Grid) -> np.ndarray:
    gradients = gradient_array(mode_array, grid)
    stiffness = grid.weight * np.einsum("aijxy,bijxy->ab", gradients, gradients)
    return 0.5 * (stiffness + stiffness.T)


@latency_logger(name="build_pod")
def build_pod(
    snapshots: SnapshotSet,
    rank_tol: float = DEFAULT_RANK_TOL,
    max_modes: Optional[int] = None,
    center: bool = False,
) -> PodBasis:
    """
    Builds the POD basis of a snapshot set.

    Parameters
    ----------
    snapshots : SnapshotSet
        At least two snapshots on one grid.
    rank_tol : float, optional
        Eigenvalues below `rank_tol * lambda_1` are discarded; this defines d.
    max_modes : int, optional
        Upper bound on d.
    center : bool, optional
        Subtract the snapshot mean first. Centered bases are for analysis only; the ROM rejects them.

    Returns
    -------
    PodBasis

    Raises
    ------
    EmptyBasisError
        If the snapshots carry no energy.
    ConditioningError
        If the Gram matrix has an eigenvalue below -1e-12 lambda_1.
    """
    grid = snapshots.grid
    data = snapshots.values.reshape(snapshots.count, -1)
    mean = None
    if center:
        mean = data.mean(axis=0)
        data = data - mean

    gram = grid.weight * (data @ data.T)
    gram = 0.5 * (gram + gram.T)
    total_energy = float(np.trace(gram))

    eigenvalues, eigenvectors = scipy.linalg.eigh(gram)
    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]

    leading = float(eigenvalues[0])
    if not leading > 0.0:
        raise EmptyBasisError("Snapshots carry no energy; cannot build a POD basis")
    if eigenvalues[-1] < -PSD_TOL * leading:
        raise ConditioningError(
            f"Gram matrix is not positive semi-definite: smallest eigenvalue {eigenvalues[-1]:.3e}, "
            f"largest {leading:.3e}"
        )

    d = int(np.count_nonzero(eigenvalues >= rank_tol * leading))
    if max_modes is not None and max_modes < d:
        logger.info(f"Capping POD rank at max_modes={max_modes} (numerical rank {d})")
        d = max_modes
    if d < snapshots.count:
        logger.debug(f"POD rank {d} of {snapshots.count} snapshots (rank_tol={rank_tol})")

    eigenvalues = np.array(eigenvalues[:d])
    eigenvectors = _fix_signs(np.array(eigenvectors[:, :d]))

    modes = (eigenvectors.T @ data) / np.sqrt(eigenvalues)[:, None]
    q, upper = scipy.linalg.qr(np.sqrt(grid.weight) * modes.T, mode="economic")
    modes = (q * np.sign(np.diag(upper))).T / np.sqrt(grid.weight)

    mode_array = modes.reshape((d, 2) + grid.shape)
    stiffness = _stiffness(mode_array, grid)

    logger.info(
        f"POD: d={d}, lambda_1={leading:.6e}, captured energy fraction {eigenvalues.sum() / total_energy:.12f}"
    )
    return PodBasis(
        mode_array=mode_array,
        eigenvalues=eigenvalues,
        grad_norms=np.array(np.diag(stiffness)),
        stiffness=stiffness,
        grid=grid,
        total_energy=total_energy,
        snapshot_count=snapshots.count,
        mean=None if mean is None else mean.reshape((2,) + grid.shape),
        provenance=derive_hash(snapshots.provenance, rank_tol=rank_tol, max_modes=max_modes, center=center),
    )


def project_array(basis: PodBasis, r: int, values: np.ndarray) -> np.ndarray:
    """Coefficients (v, phi_j), j < r, for stacked fields of shape (..., 2, nx, ny)."""
    basis.require_rank(r)
    if values.shape[-3:] != (2,) + basis.grid.shape:
        raise DimensionError(f"Array of shape {values.shape} does not live on grid {basis.grid.shape}")
    if basis.centered:
        values = values - basis.mean
    flat = values.reshape(values.shape[:-3] + (-1,))
    return basis.grid.weight * flat @ basis.mode_array[:r].reshape(r, -1).T


def lift_coefficients(basis: PodBasis, coefficients: np.ndarray) -> VelocityField:
    """The field sum_j a_j phi_j (plus the mean for centered bases)."""
    r = coefficients.shape[0]
    basis.require_rank(r)
    values = np.tensordot(coefficients, basis.mode_array[:r], axes=(0, 0))
    if basis.centered:
        values = values + basis.mean
    return VelocityField.from_stacked(values, basis.grid)


def project(basis: PodBasis, r: int, v: VelocityField) -> Projection:
    """
    The L2 ROM projection P_r.

    Returns the coefficients a_j = (v, phi_j) and the lifted field sum_j a_j phi_j; the residual is L2-orthogonal to
    every kept mode.

    Raises
    ------
    OutOfRangeError
        Unless 1 <= r <= d.
    DimensionError
        If `v` does not live on the basis grid.
    """
    basis.require_rank(r)
    basis.grid.require_same(v.grid)
    coefficients = project_array(basis, r, v.stacked())
    return Projection(coefficients=coefficients, field=lift_coefficients(basis, coefficients))


def eigentail(basis: PodBasis, r: int) -> float:
    """sqrt(sum_{j>r} lambda_j (1 + ||grad phi_j||^2)); zero at r = d."""
    basis.require_rank(r, allow_zero=True)
    tail = basis.eigenvalues[r:] * (1.0 + basis.grad_norms[r:])
    return float(np.sqrt(np.sum(tail)))


def eigenvalue_tail_sum(basis: PodBasis, r: int) -> float:
    basis.require_rank(r, allow_zero=True)
    return float(np.sum(basis.eigenvalues[r:]))


def stiffness_matrix(basis: PodBasis, r: int) -> np.ndarray:
    basis.require_rank(r)
    return np.array(basis.stiffness[:r, :r])


def stiffness_norm(basis: PodBasis, r: int) -> float:
    """Spectral norm |||S_r|||_2 of the leading r x r block of the stiffness matrix."""
    return float(scipy.linalg.eigvalsh(stiffness_matrix(basis, r))[-1])


@dataclass(frozen=True)
class ProjectionErrors:
    per_snapshot: np.ndarray
    total: float
    mean: float
    max: float
    tail_sum: float


def projection_errors(basis: PodBasis, snapshots: SnapshotSet, r: int) -> ProjectionErrors:
    """
    Squared projection errors ||u^n - P_r u^n||^2 of every snapshot.

    The total equals the eigenvalue tail sum when `snapshots` is the set the basis was built from.
    """
    basis.require_rank(r, allow_zero=True)
    basis.grid.require_same(snapshots.grid)
    values = snapshots.values - basis.mean if basis.centered else snapshots.values
    flat = values.reshape(snapshots.count, -1)
    if r > 0:
        modes = basis.mode_array[:r].reshape(r, -1)
        flat = flat - (basis.grid.weight * flat @ modes.T) @ modes
    per_snapshot = basis.grid.weight * np.sum(flat**2, axis=1)
    return ProjectionErrors(
        per_snapshot=per_snapshot,
        total=float(per_snapshot.sum()),
        mean=float(per_snapshot.mean()),
        max=float(per_snapshot.max()),
        tail_sum=eigenvalue_tail_sum(basis, r),
    )
