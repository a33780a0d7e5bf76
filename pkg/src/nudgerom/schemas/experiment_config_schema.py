# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import json
import logging
from enum import Enum
from typing import Any
from typing import Dict
from typing import List
from typing import Optional

from pydantic import confloat
from pydantic import conint
from pydantic import validator

from nudgerom.schemas.base_model_noext import BaseModelNoExt
from nudgerom.schemas.da_config_schema import DaConfigSchema
from nudgerom.schemas.dns_config_schema import DnsConfigSchema
from nudgerom.schemas.observation_schema import ObservationSchema
from nudgerom.schemas.pod_schema import PodSchema
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.schema.schema_validator import validate_schema

logger = logging.getLogger(__name__)


class ExperimentKindEnum(str, Enum):
    rate_table = "rate_table"
    mu_sweep = "mu_sweep"
    inaccurate_basis = "inaccurate_basis"
    adaptive_compare = "adaptive_compare"
    verify = "verify"


class ExperimentSchema(BaseModelNoExt):
    kind: ExperimentKindEnum = ExperimentKindEnum.mu_sweep
    r_list: List[conint(gt=0)] = [4, 6, 8, 10, 12]
    mu_list: List[confloat(ge=0)] = [0.0, 10.0, 100.0]
    window_fractions: List[confloat(gt=0, le=1)] = [0.64, 0.84]
    workers: Optional[conint(gt=0)] = None
    output_dir: str = "nudgerom_output"

    @validator("kind", pre=True)
    def case_insensitive_kind(cls, v):
        if isinstance(v, str):
            v = v.lower().replace("-", "_")
        try:
            return ExperimentKindEnum(v)
        except ValueError:
            raise ValueError(f"{v} is not a valid experiment kind")

    @validator("r_list", "mu_list", "window_fractions")
    def check_non_empty(cls, v, field):
        if not v:
            raise ValueError(f"{field.name} must not be empty")
        return v

    @validator("r_list")
    def check_increasing(cls, v):
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("r_list must be strictly increasing")
        return v


class ExperimentConfigSchema(BaseModelNoExt):
    dns: DnsConfigSchema
    observation: ObservationSchema
    pod: PodSchema = PodSchema()
    darom: DaConfigSchema
    experiment: ExperimentSchema = ExperimentSchema()


def validate_experiment_config(document: Dict[str, Any]) -> ExperimentConfigSchema:
    """
    Validates a configuration document against `ExperimentConfigSchema`.

    Raises
    ------
    ConfigurationError
        Listing every offending field, for unknown keys as well as out-of-range values.
    """
    return validate_schema(document, ExperimentConfigSchema)


def load_experiment_config(path: str) -> ExperimentConfigSchema:
    """Reads a JSON configuration file and validates it."""
    try:
        with open(path, "r") as f:
            document = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Configuration file '{path}' is not valid JSON: {e}")
    if not isinstance(document, dict):
        raise ConfigurationError(f"Configuration file '{path}' must contain a JSON object")

    logger.debug(f"Loaded configuration from {path}")
    return validate_experiment_config(document)
