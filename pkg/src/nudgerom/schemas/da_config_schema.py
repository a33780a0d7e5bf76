# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from enum import Enum
from typing import Optional

from pydantic import confloat
from pydantic import conint
from pydantic import root_validator
from pydantic import validator

from nudgerom.schemas.base_model_noext import BaseModelNoExt
from nudgerom.schemas.dns_config_schema import StepperEnum
from nudgerom.schemas.dns_config_schema import parse_stepper

logger = logging.getLogger(__name__)

TIME_ALIGNMENT_TOL = 1e-9


class PicardSchema(BaseModelNoExt):
    tol: confloat(gt=0) = 1e-10
    max_iters: conint(gt=0) = 25


class AdaptiveSchema(BaseModelNoExt):
    check_stride: conint(gt=0) = 10
    mu_step: confloat(gt=0) = 1.0
    energy_band: confloat(gt=0) = 0.02
    mu_min: confloat(ge=0) = 0.0
    mu_max: confloat(ge=0) = 1e6

    @root_validator(skip_on_failure=True)
    def check_mu_bounds(cls, values):
        if values["mu_min"] > values["mu_max"]:
            raise ValueError("mu_min must not exceed mu_max")
        return values


class RomInitialConditionEnum(str, Enum):
    zero = "zero"
    projected = "projected"


class DaConfigSchema(BaseModelNoExt):
    """
    Settings of one DA-ROM run.

    `adaptive` switches the nudging-parameter controller on when present; `mu0` is then the starting value.
    `t_end` must be an integer multiple of `dt`.
    """

    r: Optional[conint(gt=0)] = None
    mu0: confloat(ge=0) = 0.0
    dt: confloat(gt=0)
    t_end: confloat(gt=0)
    stepper: StepperEnum = StepperEnum.bdf2
    nonlinear: PicardSchema = PicardSchema()
    adaptive: Optional[AdaptiveSchema] = None
    initial_condition: RomInitialConditionEnum = RomInitialConditionEnum.zero
    blowup_norm: Optional[confloat(gt=0)] = None

    @validator("stepper", pre=True)
    def case_insensitive_stepper(cls, v):
        return parse_stepper(v)

    @root_validator(skip_on_failure=True)
    def check_time_alignment(cls, values):
        ratio = values["t_end"] / values["dt"]
        if abs(ratio - round(ratio)) > TIME_ALIGNMENT_TOL * max(1.0, ratio) or round(ratio) < 1:
            raise ValueError(f"t_end={values['t_end']} is not an integer multiple of dt={values['dt']}")
        adaptive = values.get("adaptive")
        if adaptive is not None and not adaptive.mu_min <= values["mu0"] <= adaptive.mu_max:
            raise ValueError("mu0 must lie within [adaptive.mu_min, adaptive.mu_max]")
        return values

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    @property
    def is_adaptive(self) -> bool:
        return self.adaptive is not None
