# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Offline assembly of the r-dimensional Galerkin operators.

With u_r = sum_j a_j phi_j and an L2-orthonormal basis, the DA-ROM system reads

    da/dt + N(a) a + nu S a + mu G a = f + mu obs_proj(t),

where S_ij = (grad phi_j, grad phi_i), N(a)_ij = sum_k a_k T_kji with T_ijk = b*(phi_i, phi_j, phi_k),
G_ij = (I_H phi_j, I_H phi_i) and obs_proj_i = (I_H u, I_H phi_i).
"""

import logging
from dataclasses import dataclass
from typing import Optional
from typing import Tuple

import numpy as np

from nudgerom.fields.operators import dealias_array
from nudgerom.fields.operators import gradient_array
from nudgerom.fields.velocity import VelocityField
from nudgerom.observation.coarse_mesh import CoarseMesh
from nudgerom.pod.basis import PodBasis
from nudgerom.util.converters.provenance import derive_hash
from nudgerom.util.exception_handlers.errors import ConditioningError
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import DimensionError
from nudgerom.util.exception_handlers.errors import PreconditionError
from nudgerom.util.tracing.latency import latency_logger

logger = logging.getLogger(__name__)

ORTHONORMALITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class RomOperators:
    """
    Immutable ROM operators; safe to share between concurrent runs.

    Attributes
    ----------
    r : int
    S : np.ndarray
        Stiffness matrix, (r, r).
    T : np.ndarray
        Trilinear tensor T_ijk = b*(phi_i, phi_j, phi_k), (r, r, r).
    G : np.ndarray
        Nudging Gram matrix, (r, r).
    f_vec : np.ndarray
        Forcing projection (f, phi_i), (r,).
    coarse_modes : np.ndarray
        Cell means of the modes, (r, 2, cx, cy).
    nu : float
    H : float
    cell_area : float
    basis_provenance : str
    provenance : str
    """

    r: int
    S: np.ndarray
    T: np.ndarray
    G: np.ndarray
    f_vec: np.ndarray
    coarse_modes: np.ndarray
    nu: float
    H: float
    cell_area: float
    basis_provenance: str
    provenance: str

    def __post_init__(self):
        r = self.r
        expected = {"S": (r, r), "T": (r, r, r), "G": (r, r), "f_vec": (r,)}
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise DimensionError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        if self.coarse_modes.shape[:2] != (r, 2):
            raise DimensionError(f"Coarse modes of shape {self.coarse_modes.shape} do not match r={r}")
        for array in (self.S, self.T, self.G, self.f_vec, self.coarse_modes):
            array.setflags(write=False)

    @property
    def cell_shape(self) -> Tuple[int, int]:
        return tuple(self.coarse_modes.shape[2:])

    def convection_matrix(self, a: np.ndarray) -> np.ndarray:
        """N(a) with N(a)_ij = sum_k a_k T_kji, the convecting field lagged in the first slot."""
        return np.einsum("k,kji->ij", a, self.T)

    def nonlinear(self, a: np.ndarray) -> np.ndarray:
        return self.convection_matrix(a) @ a

    def obs_proj(self, obs: np.ndarray) -> np.ndarray:
        """(I_H u, I_H phi_i) from observed cell means of shape (2, cx, cy)."""
        obs = np.asarray(obs, dtype=np.float64)
        if obs.shape != (2,) + self.cell_shape:
            raise DimensionError(f"Observation of shape {obs.shape} does not match cells {self.cell_shape}")
        return self.cell_area * (self.coarse_modes.reshape(self.r, -1) @ obs.reshape(-1))

    def observed_norm_sq(self, obs: np.ndarray) -> float:
        """||I_H u||^2 from cell means."""
        return self.cell_area * float(np.sum(np.asarray(obs) ** 2))

    def admissible(self, mu: float) -> bool:
        """The advisory condition mu H^2 < nu."""
        return mu * self.H**2 < self.nu


def _trilinear_tensor(modes: np.ndarray, basis: PodBasis) -> np.ndarray:
    grid = basis.grid
    dealiased = dealias_array(modes, grid)
    gradients = gradient_array(dealiased, grid)
    r = modes.shape[0]
    advective = np.empty((r, r, r))
    for i in range(r):
        # (phi_i . grad) phi_j for every j
        advection = np.einsum("cxy,jdcxy->jdxy", dealiased[i], gradients)
        advective[i] = grid.weight * np.einsum("jdxy,kdxy->jk", advection, dealiased)
    return 0.5 * (advective - advective.transpose(0, 2, 1))


@latency_logger(name="assemble")
def assemble(
    basis: PodBasis,
    r: int,
    mesh: CoarseMesh,
    forcing: Optional[VelocityField] = None,
    nu: float = 1.0,
) -> RomOperators:
    """
    Assembles the ROM operators for the leading `r` modes.

    Parameters
    ----------
    basis : PodBasis
        Uncentered, L2-orthonormal basis.
    r : int
        1 <= r <= d.
    mesh : CoarseMesh
        Observation mesh on the basis grid.
    forcing : VelocityField, optional
        Time-independent body force; None means unforced.
    nu : float, optional
        Viscosity.

    Returns
    -------
    RomOperators

    Raises
    ------
    ConfigurationError
        If the mesh is not nested with the basis grid.
    PreconditionError
        If the basis is centered.
    OutOfRangeError
        Unless 1 <= r <= d.
    ConditioningError
        If the leading modes are not orthonormal.
    """
    basis.require_rank(r)
    if basis.centered:
        raise PreconditionError("Centered POD bases are for analysis only; the ROM needs an uncentered basis")
    grid = basis.grid
    if not mesh.grid.same_as(grid):
        raise ConfigurationError(f"Observation mesh grid {mesh.grid.shape} is not the basis grid {grid.shape}")
    if not nu > 0.0:
        raise ConfigurationError(f"nu must be strictly positive, got {nu}")

    modes = np.array(basis.mode_array[:r])
    flat = modes.reshape(r, -1)
    mass = grid.weight * flat @ flat.T
    deviation = float(np.max(np.abs(mass - np.eye(r))))
    if deviation > ORTHONORMALITY_TOL:
        raise ConditioningError(f"Leading {r} modes are not orthonormal (max deviation {deviation:.3e})")

    stiffness = np.array(basis.stiffness[:r, :r])
    trilinear = _trilinear_tensor(modes, basis)

    coarse_modes = mesh.cell_means_array(modes)
    coarse_flat = coarse_modes.reshape(r, -1)
    nudging = mesh.cell_area * coarse_flat @ coarse_flat.T
    nudging = 0.5 * (nudging + nudging.T)

    if forcing is None:
        f_vec = np.zeros(r)
    else:
        grid.require_same(forcing.grid)
        f_vec = grid.weight * flat @ forcing.stacked().reshape(-1)

    logger.info(
        f"Assembled ROM operators: r={r}, H={mesh.H:.6g} ({mesh.cell_count} cells), nu={nu}, "
        f"|S|={np.linalg.norm(stiffness, 2):.4e}, |G|={np.linalg.norm(nudging, 2):.4e}"
    )
    return RomOperators(
        r=r,
        S=stiffness,
        T=trilinear,
        G=nudging,
        f_vec=f_vec,
        coarse_modes=coarse_modes,
        nu=float(nu),
        H=float(mesh.H),
        cell_area=float(mesh.cell_area),
        basis_provenance=basis.provenance,
        provenance=derive_hash(basis.provenance, r=r, H=mesh.H, nu=nu, f_vec=f_vec),
    )
