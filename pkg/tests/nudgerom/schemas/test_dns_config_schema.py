# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import pytest
from pydantic import ValidationError

from nudgerom.schemas.dns_config_schema import AutoSpinupParamsSchema
from nudgerom.schemas.dns_config_schema import DnsConfigSchema
from nudgerom.schemas.dns_config_schema import ForcingTypeEnum
from nudgerom.schemas.dns_config_schema import InitialConditionTypeEnum
from nudgerom.schemas.dns_config_schema import KolmogorovForcingParamsSchema
from nudgerom.schemas.dns_config_schema import RandomSeededParamsSchema
from nudgerom.schemas.dns_config_schema import StepperEnum


def valid_dns_document(**overrides):
    document = {
        "grid": {"nx": 32, "ny": 32},
        "nu": 0.01,
        "dt": 0.01,
        "t_end": 2.0,
        "forcing": {"type": "kolmogorov", "params": {"amplitude": 1.0, "wavenumber": 4}},
        "initial_condition": {"type": "random_seeded", "params": {"seed": 3}},
        "spinup": {"type": "fixed", "params": {"t_start": 1.0}},
    }
    document.update(overrides)
    return document


def test_dns_config_valid():
    config = DnsConfigSchema(**valid_dns_document())
    assert config.forcing.type == ForcingTypeEnum.kolmogorov
    assert isinstance(config.forcing.params, KolmogorovForcingParamsSchema)
    assert config.initial_condition.type == InitialConditionTypeEnum.random_seeded
    assert isinstance(config.initial_condition.params, RandomSeededParamsSchema)
    assert config.initial_condition.params.seed == 3
    assert config.stepper == StepperEnum.bdf2
    assert config.n_steps == 200


@pytest.mark.parametrize("value, expected", [("BE", StepperEnum.backward_euler), ("BDF2", StepperEnum.bdf2)])
def test_dns_config_stepper_aliases(value, expected):
    assert DnsConfigSchema(**valid_dns_document(stepper=value)).stepper == expected


def test_dns_config_rejects_unknown_stepper():
    with pytest.raises(ValidationError, match="not a valid stepper"):
        DnsConfigSchema(**valid_dns_document(stepper="rk4"))


def test_dns_config_rejects_params_of_another_type():
    document = valid_dns_document(initial_condition={"type": "taylor_green", "params": {"seed": 1}})
    with pytest.raises(ValidationError):
        DnsConfigSchema(**document)


def test_dns_config_rejects_unknown_keys():
    with pytest.raises(ValidationError, match="extra fields not permitted"):
        DnsConfigSchema(**valid_dns_document(viscosity=0.1))


@pytest.mark.parametrize("field, value", [("nu", 0.0), ("dt", -0.1), ("t_end", 0.0)])
def test_dns_config_rejects_nonpositive_values(field, value):
    with pytest.raises(ValidationError):
        DnsConfigSchema(**valid_dns_document(**{field: value}))


def test_dns_config_window_must_fit():
    with pytest.raises(ValidationError, match="t_start"):
        DnsConfigSchema(**valid_dns_document(spinup={"type": "fixed", "params": {"t_start": 2.0}}))
    with pytest.raises(ValidationError, match="window_length"):
        DnsConfigSchema(
            **valid_dns_document(spinup={"type": "auto", "params": {"min_time": 1.5, "window_length": 1.0}})
        )


def test_dns_config_auto_spinup():
    config = DnsConfigSchema(**valid_dns_document(spinup={"type": "auto", "params": {"window_length": 0.5}}))
    assert isinstance(config.spinup.params, AutoSpinupParamsSchema)
    assert config.spinup.params.rel_tol == pytest.approx(0.01)


def test_from_file_initial_condition_requires_existing_file(tmp_path):
    document = valid_dns_document(
        initial_condition={"type": "from_file", "params": {"path": str(tmp_path / "missing.bin")}}
    )
    with pytest.raises(ValidationError, match="does not exist"):
        DnsConfigSchema(**document)
