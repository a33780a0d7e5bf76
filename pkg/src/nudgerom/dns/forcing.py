# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging

import numpy as np

from nudgerom.fields.grid import Grid
from nudgerom.fields.velocity import VelocityField
from nudgerom.schemas.dns_config_schema import ForcingSchema
from nudgerom.schemas.dns_config_schema import ForcingTypeEnum

logger = logging.getLogger(__name__)


def kolmogorov_forcing(grid: Grid, amplitude: float, wavenumber: int) -> VelocityField:
    """Shear forcing f = (A sin(k y), 0) with k = 2 pi wavenumber / ly; divergence free."""
    _, y = grid.coordinates
    k = 2.0 * np.pi * wavenumber / grid.ly
    return VelocityField(amplitude * np.sin(k * y), np.zeros(grid.shape), grid)


def build_forcing(forcing: ForcingSchema, grid: Grid) -> VelocityField:
    """
    Evaluates a forcing configuration on `grid`.

    The forcing is autonomous, so one field serves every time step.
    """
    if forcing.type == ForcingTypeEnum.kolmogorov:
        logger.debug(
            f"Kolmogorov forcing: amplitude={forcing.params.amplitude}, wavenumber={forcing.params.wavenumber}"
        )
        return kolmogorov_forcing(grid, forcing.params.amplitude, forcing.params.wavenumber)

    return VelocityField.zeros(grid)


def is_unforced(forcing: ForcingSchema) -> bool:
    return forcing.type == ForcingTypeEnum.none or (
        forcing.type == ForcingTypeEnum.kolmogorov and forcing.params.amplitude == 0.0
    )
