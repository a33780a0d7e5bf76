# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from typing import Tuple

import numpy as np

from nudgerom.fields.grid import Grid
from nudgerom.fields.operators import kinetic_energy
from nudgerom.fields.operators import leray_project_spectral
from nudgerom.fields.velocity import VelocityField
from nudgerom.schemas.dns_config_schema import InitialConditionSchema
from nudgerom.schemas.dns_config_schema import InitialConditionTypeEnum
from nudgerom.storage.snapshot_file import read_snapshot_file
from nudgerom.util.exception_handlers.errors import DimensionError
from nudgerom.util.exception_handlers.errors import OutOfRangeError

logger = logging.getLogger(__name__)


def _taylor_green_wavenumbers(grid: Grid, kx: int, ky: int) -> Tuple[float, float]:
    return 2.0 * np.pi * kx / grid.lx, 2.0 * np.pi * ky / grid.ly


def taylor_green_field(
    grid: Grid, t: float = 0.0, nu: float = 0.0, amplitude: float = 1.0, kx: int = 1, ky: int = 1
) -> VelocityField:
    """
    The Taylor-Green vortex at time `t`.

    u1 = A sin(a x) cos(b y), u2 = -A (a/b) cos(a x) sin(b y), damped by exp(-nu (a^2 + b^2) t). Every Fourier
    component shares |k|, so the advection term is a pure gradient and the decay is exact for the unforced NSE.
    """
    a, b = _taylor_green_wavenumbers(grid, kx, ky)
    x, y = grid.coordinates
    decay = amplitude * np.exp(-nu * (a**2 + b**2) * t)
    u1 = decay * np.sin(a * x) * np.cos(b * y)
    u2 = -decay * (a / b) * np.cos(a * x) * np.sin(b * y)
    return VelocityField(u1, u2, grid)


def taylor_green_energy(
    grid: Grid, t: float = 0.0, nu: float = 0.0, amplitude: float = 1.0, kx: int = 1, ky: int = 1
) -> float:
    """Closed-form kinetic energy 1/2 ||u(t)||^2 of `taylor_green_field`."""
    a, b = _taylor_green_wavenumbers(grid, kx, ky)
    initial = 0.5 * amplitude**2 * (1.0 + (a / b) ** 2) * grid.area / 4.0
    return float(initial * np.exp(-2.0 * nu * (a**2 + b**2) * t))


def random_seeded_field(
    grid: Grid, seed: int, energy: float = 0.5, max_wavenumber: int = 6, spectral_slope: float = -3.0
) -> VelocityField:
    """
    A seeded random divergence-free field.

    White noise is filtered to integer wavenumbers 1 <= |k| <= `max_wavenumber` with amplitude |k|^(slope/2),
    Leray projected and rescaled to kinetic energy `energy`. The same seed always gives the same field.
    """
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((2,) + grid.shape)

    kx_index, ky_index = grid.wavenumber_index
    magnitude = np.sqrt(kx_index**2 + ky_index**2)
    band = (magnitude >= 1.0) & (magnitude <= max_wavenumber) & grid.dealias_mask
    amplitude = np.where(band, np.power(np.maximum(magnitude, 1.0), 0.5 * spectral_slope), 0.0)

    coefficients = leray_project_spectral(grid.to_spectral(noise) * amplitude, grid)
    field = VelocityField.from_spectral(coefficients, grid)
    current = kinetic_energy(field)
    if current <= 0.0:
        raise DimensionError(f"Grid {grid.shape} resolves no wavenumber up to {max_wavenumber}")
    return field * float(np.sqrt(energy / current))


def field_from_snapshot_file(grid: Grid, path: str, index: int = -1) -> VelocityField:
    """Loads one stored snapshot as an initial condition; the snapshot grid must match `grid`."""
    snapshots = read_snapshot_file(path)
    if not snapshots.grid.same_as(grid):
        raise DimensionError(
            f"Initial condition file '{path}' holds fields on {snapshots.grid.shape}, expected {grid.shape}"
        )
    if not -snapshots.count <= index < snapshots.count:
        raise OutOfRangeError(f"Snapshot index {index} out of range for {snapshots.count} snapshots in '{path}'")
    return snapshots.field(index)


def build_initial_condition(initial_condition: InitialConditionSchema, grid: Grid) -> VelocityField:
    params = initial_condition.params
    if initial_condition.type == InitialConditionTypeEnum.taylor_green:
        return taylor_green_field(grid, amplitude=params.amplitude, kx=params.kx, ky=params.ky)
    if initial_condition.type == InitialConditionTypeEnum.random_seeded:
        return random_seeded_field(grid, params.seed, params.energy, params.max_wavenumber, params.spectral_slope)
    if initial_condition.type == InitialConditionTypeEnum.from_file:
        return field_from_snapshot_file(grid, params.path, params.index)
    return VelocityField.zeros(grid)
