# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
import os
from enum import Enum
from typing import Optional
from typing import Union

from pydantic import confloat
from pydantic import conint
from pydantic import root_validator
from pydantic import validator

from nudgerom.schemas.base_model_noext import BaseModelNoExt
from nudgerom.schemas.grid_schema import GridSchema

logger = logging.getLogger(__name__)


class StepperEnum(str, Enum):
    backward_euler = "backward_euler"
    bdf2 = "bdf2"


STEPPER_ALIASES = {"be": StepperEnum.backward_euler, "euler": StepperEnum.backward_euler}


def parse_stepper(v):
    if isinstance(v, str):
        v = v.lower()
        v = STEPPER_ALIASES.get(v, v)
    try:
        return StepperEnum(v)
    except ValueError:
        raise ValueError(f"{v} is not a valid stepper, expected one of 'be', 'backward_euler', 'bdf2'")


class ForcingTypeEnum(str, Enum):
    none = "none"
    kolmogorov = "kolmogorov"


class NoForcingParamsSchema(BaseModelNoExt):
    pass


class KolmogorovForcingParamsSchema(BaseModelNoExt):
    amplitude: float = 1.0
    wavenumber: conint(gt=0) = 4


class ForcingSchema(BaseModelNoExt):
    type: ForcingTypeEnum = ForcingTypeEnum.none
    params: Union[KolmogorovForcingParamsSchema, NoForcingParamsSchema] = NoForcingParamsSchema()

    class Config:
        smart_union = True

    @root_validator(pre=True)
    def check_params_type(cls, values):
        forcing_type = values.get("type", ForcingTypeEnum.none)
        if isinstance(forcing_type, str):
            forcing_type = forcing_type.lower()
        expected_type = {
            ForcingTypeEnum.none: NoForcingParamsSchema,
            ForcingTypeEnum.kolmogorov: KolmogorovForcingParamsSchema,
        }.get(forcing_type)
        if expected_type is not None:
            params = values.get("params") or {}
            values["params"] = params if isinstance(params, expected_type) else expected_type(**params)
        return values


class InitialConditionTypeEnum(str, Enum):
    zero = "zero"
    taylor_green = "taylor_green"
    random_seeded = "random_seeded"
    from_file = "from_file"


class ZeroParamsSchema(BaseModelNoExt):
    pass


class TaylorGreenParamsSchema(BaseModelNoExt):
    amplitude: float = 1.0
    kx: conint(gt=0) = 1
    ky: conint(gt=0) = 1


class RandomSeededParamsSchema(BaseModelNoExt):
    seed: conint(ge=0) = 0
    energy: confloat(gt=0) = 0.5
    max_wavenumber: conint(gt=0) = 6
    spectral_slope: float = -3.0


class FromFileParamsSchema(BaseModelNoExt):
    path: str
    index: int = -1

    @validator("path")
    def check_path_exists(cls, v):
        if not os.path.isfile(v):
            raise ValueError(f"initial condition file '{v}' does not exist")
        return v


class InitialConditionSchema(BaseModelNoExt):
    type: InitialConditionTypeEnum = InitialConditionTypeEnum.taylor_green
    params: Union[
        TaylorGreenParamsSchema,
        RandomSeededParamsSchema,
        FromFileParamsSchema,
        ZeroParamsSchema,
    ] = TaylorGreenParamsSchema()

    class Config:
        smart_union = True

    @root_validator(pre=True)
    def check_params_type(cls, values):
        ic_type = values.get("type", InitialConditionTypeEnum.taylor_green)
        if isinstance(ic_type, str):
            ic_type = ic_type.lower()
        expected_type = {
            InitialConditionTypeEnum.zero: ZeroParamsSchema,
            InitialConditionTypeEnum.taylor_green: TaylorGreenParamsSchema,
            InitialConditionTypeEnum.random_seeded: RandomSeededParamsSchema,
            InitialConditionTypeEnum.from_file: FromFileParamsSchema,
        }.get(ic_type)
        if expected_type is not None:
            params = values.get("params") or {}
            values["params"] = params if isinstance(params, expected_type) else expected_type(**params)
        return values


class SpinupTypeEnum(str, Enum):
    fixed = "fixed"
    auto = "auto"


class FixedSpinupParamsSchema(BaseModelNoExt):
    t_start: confloat(ge=0) = 0.0


class AutoSpinupParamsSchema(BaseModelNoExt):
    rel_tol: confloat(gt=0, lt=1) = 0.01
    min_time: confloat(ge=0) = 0.0
    window_length: confloat(gt=0)
    check_every: conint(gt=0) = 50


class SpinupSchema(BaseModelNoExt):
    """
    When the snapshot window opens.

    `fixed` discards everything before `t_start`. `auto` waits until successive energy peaks agree to `rel_tol`
    (and at least `min_time` has passed), then records `window_length` time units of snapshots.
    """

    type: SpinupTypeEnum = SpinupTypeEnum.fixed
    params: Union[AutoSpinupParamsSchema, FixedSpinupParamsSchema] = FixedSpinupParamsSchema()

    class Config:
        smart_union = True

    @root_validator(pre=True)
    def check_params_type(cls, values):
        spinup_type = values.get("type", SpinupTypeEnum.fixed)
        if isinstance(spinup_type, str):
            spinup_type = spinup_type.lower()
        expected_type = {
            SpinupTypeEnum.fixed: FixedSpinupParamsSchema,
            SpinupTypeEnum.auto: AutoSpinupParamsSchema,
        }.get(spinup_type)
        if expected_type is not None:
            params = values.get("params") or {}
            values["params"] = params if isinstance(params, expected_type) else expected_type(**params)
        return values


class DnsConfigSchema(BaseModelNoExt):
    grid: GridSchema = GridSchema()
    nu: confloat(gt=0)
    dt: confloat(gt=0)
    t_end: confloat(gt=0)
    forcing: ForcingSchema = ForcingSchema()
    initial_condition: InitialConditionSchema = InitialConditionSchema()
    snapshot_stride: conint(ge=1) = 1
    stepper: StepperEnum = StepperEnum.bdf2
    spinup: SpinupSchema = SpinupSchema()
    cfl_safety: confloat(gt=0) = 0.25
    blowup_energy: Optional[confloat(gt=0)] = None

    @validator("stepper", pre=True)
    def case_insensitive_stepper(cls, v):
        return parse_stepper(v)

    @root_validator(skip_on_failure=True)
    def check_window(cls, values):
        spinup = values["spinup"]
        if spinup.type == SpinupTypeEnum.fixed and spinup.params.t_start >= values["t_end"]:
            raise ValueError("spinup.t_start must be smaller than t_end")
        if spinup.type == SpinupTypeEnum.auto:
            if spinup.params.min_time + spinup.params.window_length > values["t_end"]:
                raise ValueError("spinup.min_time + spinup.window_length must not exceed t_end")
        if values["dt"] > values["t_end"]:
            raise ValueError("dt must not exceed t_end")
        return values

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))
