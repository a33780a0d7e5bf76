# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

from unittest.mock import patch

import numpy as np
import pytest

from nudgerom.dns.initial_conditions import taylor_green_energy
from nudgerom.dns.solver import DnsState
from nudgerom.dns.solver import dns_run
from nudgerom.fields.operators import divergence
from nudgerom.fields.operators import kinetic_energy
from nudgerom.util.exception_handlers.errors import BlowUpError
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import DimensionError
from nudgerom.util.exception_handlers.errors import PreconditionError

from .conftest import small_dns_config

MODULE_UNDER_TEST = "nudgerom.dns.solver"


def test_fixed_window_records_snapshots(dns_config):
    result = dns_run(dns_config)
    np.testing.assert_allclose(result.snapshots.times, [0.5, 0.6, 0.7, 0.8, 0.9, 1.0])
    assert result.window_state.step == 5
    assert result.snapshots.provenance == result.provenance
    assert result.energy_history.size == 11
    for field in result.snapshots.fields:
        np.testing.assert_allclose(divergence(field), 0.0, atol=1e-10)


def test_snapshot_stride():
    result = dns_run(small_dns_config(snapshot_stride=2))
    np.testing.assert_allclose(result.snapshots.times, [0.5, 0.7, 0.9])


def test_dns_run_is_deterministic(dns_config):
    first = dns_run(dns_config)
    second = dns_run(dns_config)
    np.testing.assert_array_equal(first.snapshots.values, second.snapshots.values)


def test_continuation_from_window_state_is_exact(dns_config):
    full = dns_run(dns_config)
    continued = dns_run(dns_config, start_state=full.window_state, t_end=dns_config.t_end, record_snapshots=False)
    assert continued.snapshots is None
    np.testing.assert_allclose(continued.final.stacked(), full.final.stacked(), rtol=0, atol=1e-13)
    np.testing.assert_allclose(continued.final.stacked(), full.snapshots.values[-1], rtol=0, atol=1e-13)


def test_observer_sees_every_step(dns_config):
    seen = []
    dns_run(dns_config, observer=lambda step, t, velocity: seen.append((step, round(t, 12))))
    assert [step for step, _ in seen] == list(range(11))
    assert seen[-1][1] == pytest.approx(1.0)


def test_unforced_zero_state_stays_zero():
    config = small_dns_config(initial_condition={"type": "zero"}, forcing={"type": "none"})
    result = dns_run(config)
    assert not np.any(result.final.stacked())


@pytest.mark.parametrize("stepper", ["bdf2", "backward_euler"])
def test_taylor_green_decay(stepper):
    config = small_dns_config(
        initial_condition={"type": "taylor_green", "params": {"amplitude": 1.0}},
        forcing={"type": "none"},
        stepper=stepper,
        dt=0.01,
    )
    result = dns_run(config)
    exact = taylor_green_energy(config.grid.to_grid(), 1.0, config.nu)
    assert kinetic_energy(result.final) == pytest.approx(exact, rel=5e-3)


def test_blow_up_is_reported():
    config = small_dns_config(blowup_energy=1e-3)
    with pytest.raises(BlowUpError) as exc_info:
        dns_run(config)
    assert exc_info.value.step == 0


def test_window_with_single_snapshot_is_rejected():
    config = small_dns_config(spinup={"type": "fixed", "params": {"t_start": 0.95}})
    with pytest.raises(PreconditionError, match="at least 2"):
        dns_run(config)


def test_start_state_must_match(dns_config):
    result = dns_run(dns_config)
    with pytest.raises(ConfigurationError):
        dns_run(small_dns_config(dt=0.05), start_state=result.window_state)
    bad = DnsState(u_hat=np.zeros((2, 8, 5), dtype=complex), u_hat_prev=None, step=0, dt=0.1)
    with pytest.raises(DimensionError):
        dns_run(dns_config, start_state=bad)


@patch(f"{MODULE_UNDER_TEST}.logger")
def test_cfl_advisory_logged_once(mock_logger):
    config = small_dns_config(cfl_safety=1e-6)
    dns_run(config)
    warnings = [call for call in mock_logger.warning.call_args_list if "CFL advisory" in call[0][0]]
    assert len(warnings) == 1


@pytest.mark.parametrize("stepper", ["bdf2", "backward_euler"])
@pytest.mark.parametrize("nu,dt", [(0.05, 0.1), (0.002, 0.02), (0.0002, 0.05)])
def test_unforced_energy_does_not_increase(stepper, nu, dt):
    config = small_dns_config(forcing={"type": "none"}, stepper=stepper, nu=nu, dt=dt)
    energies = dns_run(config).energy_history
    assert np.all(np.isfinite(energies))
    assert np.all(np.diff(energies) <= 1e-12 * energies[0])
