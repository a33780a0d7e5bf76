# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


from typing import Optional

from pydantic import confloat
from pydantic import conint
from pydantic import root_validator

from nudgerom.schemas.base_model_noext import BaseModelNoExt


class ObservationSchema(BaseModelNoExt):
    """
    Coarse observation settings.

    Exactly one of `H` (coarse cell width) or `cells` (coarse cells per side, H = lx / cells) must be given.
    """

    H: Optional[confloat(gt=0)] = None
    cells: Optional[conint(gt=0)] = None
    noise_std: confloat(ge=0) = 0.0
    noise_seed: conint(ge=0) = 0

    @root_validator(skip_on_failure=True)
    def check_mesh_width(cls, values):
        if (values.get("H") is None) == (values.get("cells") is None):
            raise ValueError("exactly one of 'H' or 'cells' must be set")
        return values

    def resolve_H(self, lx: float) -> float:
        if self.H is not None:
            return self.H
        return lx / self.cells
