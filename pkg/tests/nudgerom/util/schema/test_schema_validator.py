# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import pytest
from pydantic import Field

from nudgerom.schemas.base_model_noext import BaseModelNoExt
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.schema.schema_validator import validate_schema


class RunSchema(BaseModelNoExt):
    name: str
    r: int = Field(..., gt=0)


def test_validate_schema_success():
    validated = validate_schema({"name": "darom", "r": 8}, RunSchema)
    assert validated.name == "darom"
    assert validated.r == 8


def test_validate_schema_failure():
    with pytest.raises(ConfigurationError) as exc_info:
        validate_schema({"name": "darom", "r": -5}, RunSchema)
    assert "r:" in str(exc_info.value)


def test_validate_schema_missing_required_field():
    with pytest.raises(ValueError):
        validate_schema({"name": "darom"}, RunSchema)


def test_validate_schema_rejects_extra_fields():
    with pytest.raises(ConfigurationError) as exc_info:
        validate_schema({"name": "darom", "r": 8, "mu": 10.0}, RunSchema)
    assert "extra fields not permitted" in str(exc_info.value)
