# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


from typing import Optional

from pydantic import confloat
from pydantic import conint

from nudgerom.schemas.base_model_noext import BaseModelNoExt


class PodSchema(BaseModelNoExt):
    rank_tol: confloat(gt=0, lt=1) = 1e-12
    max_modes: Optional[conint(gt=0)] = None
    center: bool = False
    window_fraction: Optional[confloat(gt=0, le=1)] = None  # None keeps the whole snapshot window
    period: Optional[confloat(gt=0)] = None  # detected from the energy signal when unset
