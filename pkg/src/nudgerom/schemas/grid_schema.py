# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import math

from pydantic import confloat
from pydantic import conint
from pydantic import validator

from nudgerom.fields.grid import Grid
from nudgerom.schemas.base_model_noext import BaseModelNoExt


class GridSchema(BaseModelNoExt):
    nx: conint(gt=0) = 64
    ny: conint(gt=0) = 64
    lx: confloat(gt=0) = 2.0 * math.pi
    ly: confloat(gt=0) = 2.0 * math.pi
    dealias_fraction: confloat(gt=0, le=1) = 2.0 / 3.0

    @validator("nx", "ny")
    def check_even(cls, v, field):
        if v % 2 != 0:
            raise ValueError(f"{field.name} must be a positive even integer")
        return v

    def to_grid(self) -> Grid:
        return Grid(nx=self.nx, ny=self.ny, lx=self.lx, ly=self.ly, dealias_fraction=self.dealias_fraction)
