# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import pytest

from nudgerom.schemas.dns_config_schema import DnsConfigSchema


def small_dns_config(**overrides) -> DnsConfigSchema:
    document = {
        "grid": {"nx": 16, "ny": 16},
        "nu": 0.05,
        "dt": 0.1,
        "t_end": 1.0,
        "initial_condition": {"type": "random_seeded", "params": {"seed": 7, "energy": 0.5}},
        "forcing": {"type": "kolmogorov", "params": {"amplitude": 0.5, "wavenumber": 2}},
        "spinup": {"type": "fixed", "params": {"t_start": 0.5}},
    }
    document.update(overrides)
    return DnsConfigSchema(**document)


@pytest.fixture
def dns_config():
    return small_dns_config()
