# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Inner products, spectral derivatives, the Leray projection and the trilinear forms on periodic fields.

The public functions take `VelocityField`s. The `*_array` helpers work on stacked component arrays of shape
(..., 2, nx, ny) and are what the DNS solver and the ROM assembly use in their inner loops.
"""

import logging

import numpy as np

from nudgerom.fields.grid import Grid
from nudgerom.fields.velocity import TensorField
from nudgerom.fields.velocity import VelocityField
from nudgerom.util.exception_handlers.errors import DimensionError

logger = logging.getLogger(__name__)


def _require_same_grid(*fields) -> Grid:
    grid = fields[0].grid
    for other in fields[1:]:
        grid.require_same(other.grid)
    return grid


def _require_velocity(values: np.ndarray, grid: Grid) -> None:
    if values.shape[-3:] != (2,) + grid.shape:
        raise DimensionError(f"Expected velocity array of trailing shape {(2,) + grid.shape}, got {values.shape}")


def gradient_array(values: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Spectral gradient of stacked velocity arrays.

    Parameters
    ----------
    values : np.ndarray
        Shape (..., 2, nx, ny).
    grid : Grid

    Returns
    -------
    np.ndarray
        Shape (..., 2, 2, nx, ny); entry [..., i, j, :, :] is du_i/dx_j.
    """
    _require_velocity(values, grid)
    kx, ky = grid.wavenumbers
    coefficients = grid.to_spectral(values)
    derivatives = np.stack([1j * kx * coefficients, 1j * ky * coefficients], axis=-3)
    return grid.to_physical(derivatives)


def divergence_array(values: np.ndarray, grid: Grid) -> np.ndarray:
    _require_velocity(values, grid)
    kx, ky = grid.wavenumbers
    coefficients = grid.to_spectral(values)
    return grid.to_physical(1j * kx * coefficients[..., 0, :, :] + 1j * ky * coefficients[..., 1, :, :])


def leray_project_spectral(coefficients: np.ndarray, grid: Grid) -> np.ndarray:
    """Removes the gradient part of half-spectrum velocity coefficients of shape (..., 2, *spectral_shape)."""
    kx, ky = grid.wavenumbers
    k_squared = kx**2 + ky**2
    inverse = np.divide(1.0, k_squared, out=np.zeros_like(k_squared), where=k_squared > 0.0)
    k_dot_u = (kx * coefficients[..., 0, :, :] + ky * coefficients[..., 1, :, :]) * inverse
    projected = np.empty_like(coefficients)
    projected[..., 0, :, :] = coefficients[..., 0, :, :] - kx * k_dot_u
    projected[..., 1, :, :] = coefficients[..., 1, :, :] - ky * k_dot_u
    return projected


def dealias_array(values: np.ndarray, grid: Grid) -> np.ndarray:
    return grid.to_physical(grid.to_spectral(values) * grid.dealias_mask)


def advection_array(w: np.ndarray, u: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Nodal values of (w . grad) u with both inputs dealiased.

    `w` and `u` have shape (..., 2, nx, ny) and broadcast against each other; the result has the broadcast shape.
    """
    w = dealias_array(w, grid)
    grad_u = gradient_array(dealias_array(u, grid), grid)
    return np.einsum("...jxy,...ijxy->...ixy", w, grad_u)


def inner_l2_array(a: np.ndarray, b: np.ndarray, grid: Grid) -> np.ndarray:
    """Weighted L2 inner product over the trailing (2, nx, ny) axes."""
    return grid.weight * np.sum(a * b, axis=(-3, -2, -1))


def inner_l2(a: VelocityField, b: VelocityField) -> float:
    """
    L2 inner product (a, b), the nodal sum weighted by hx * hy.

    Raises
    ------
    DimensionError
        If the fields live on different grids.
    """
    grid = _require_same_grid(a, b)
    return float(grid.weight * (np.sum(a.u1 * b.u1) + np.sum(a.u2 * b.u2)))


def norm_l2(a: VelocityField) -> float:
    return float(np.sqrt(max(inner_l2(a, a), 0.0)))


def kinetic_energy(a: VelocityField) -> float:
    return 0.5 * inner_l2(a, a)


def gradient(a: VelocityField) -> TensorField:
    return TensorField(gradient_array(a.stacked(), a.grid), a.grid)


def divergence(a: VelocityField) -> np.ndarray:
    """Nodal values of the spectral divergence."""
    return divergence_array(a.stacked(), a.grid)


def inner_h1_seminorm(a: VelocityField, b: VelocityField) -> float:
    """(grad a, grad b), the Frobenius inner product of the gradients."""
    grid = _require_same_grid(a, b)
    grad_a = gradient_array(a.stacked(), grid)
    grad_b = gradient_array(b.stacked(), grid)
    return float(grid.weight * np.sum(grad_a * grad_b))


def norm_grad(a: VelocityField) -> float:
    return float(np.sqrt(max(inner_h1_seminorm(a, a), 0.0)))


def leray_project(a: VelocityField) -> VelocityField:
    """
    L2-orthogonal projection onto discretely divergence-free fields.

    The mean flow is left untouched. The projection uses the same wavenumbers as `divergence`, so the result is
    divergence free to roundoff.
    """
    grid = a.grid
    return VelocityField.from_spectral(leray_project_spectral(a.spectral(), grid), grid)


def dealias(a: VelocityField) -> VelocityField:
    return VelocityField.from_stacked(dealias_array(a.stacked(), a.grid), a.grid)


def b_form(w: VelocityField, u: VelocityField, v: VelocityField) -> float:
    """
    The convective trilinear form b(w, u, v) = (w . grad u, v).

    All three arguments are dealiased with the grid's mask, so the quadrature is exact for the truncated fields.

    Raises
    ------
    DimensionError
        If the fields live on different grids.
    """
    grid = _require_same_grid(w, u, v)
    convective = advection_array(w.stacked(), u.stacked(), grid)
    return float(inner_l2_array(convective, dealias_array(v.stacked(), grid), grid))


def b_star(w: VelocityField, u: VelocityField, v: VelocityField) -> float:
    """
    The explicitly skew-symmetric form b*(w, u, v) = 1/2 b(w, u, v) - 1/2 b(w, v, u).

    b*(w, v, v) vanishes identically for every w and v.
    """
    return 0.5 * b_form(w, u, v) - 0.5 * b_form(w, v, u)
