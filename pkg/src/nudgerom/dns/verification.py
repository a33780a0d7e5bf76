# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Manufactured-solution checks of the DNS: the decaying Taylor-Green vortex and an empirical temporal order study.
"""

import logging
from dataclasses import dataclass

import numpy as np

from nudgerom.dns.initial_conditions import taylor_green_energy
from nudgerom.dns.solver import dns_run
from nudgerom.fields.operators import kinetic_energy
from nudgerom.schemas.dns_config_schema import DnsConfigSchema
from nudgerom.schemas.dns_config_schema import ForcingTypeEnum
from nudgerom.schemas.dns_config_schema import InitialConditionTypeEnum
from nudgerom.util.exception_handlers.errors import PreconditionError
from nudgerom.util.tracing.latency import latency_logger

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrderCheckResult:
    """
    Outcome of a temporal refinement study.

    `monotone` is False when the error did not decrease at every refinement; the fitted rate is still reported.
    """

    dts: np.ndarray
    errors: np.ndarray
    rate: float
    monotone: bool


@latency_logger(name="temporal_order_check")
def temporal_order_check(config: DnsConfigSchema, refinements: int) -> OrderCheckResult:
    """
    Estimates the temporal convergence order of the DNS stepper on the Taylor-Green vortex.

    The run is repeated with dt, dt/2, ..., dt/2^(refinements-1); the error is the absolute difference between the
    computed and the exact kinetic energy at `config.t_end`. The rate is the least-squares slope of log(error)
    against log(dt).

    Parameters
    ----------
    config : DnsConfigSchema
        Unforced Taylor-Green configuration; `dt` is the coarsest step.
    refinements : int
        Number of step sizes, at least 3.

    Returns
    -------
    OrderCheckResult

    Raises
    ------
    PreconditionError
        If fewer than three refinements are requested or the configuration is not an unforced Taylor-Green run.
    """
    if refinements < 3:
        raise PreconditionError(f"temporal_order_check needs at least 3 refinements, got {refinements}")
    if config.initial_condition.type != InitialConditionTypeEnum.taylor_green:
        raise PreconditionError("temporal_order_check requires the Taylor-Green initial condition")
    if config.forcing.type != ForcingTypeEnum.none:
        raise PreconditionError("temporal_order_check requires an unforced configuration")

    grid = config.grid.to_grid()
    params = config.initial_condition.params
    exact = taylor_green_energy(grid, config.t_end, config.nu, params.amplitude, params.kx, params.ky)

    dts = config.dt / 2.0 ** np.arange(refinements)
    errors = []
    for dt in dts:
        refined = config.copy(update={"dt": float(dt)})
        result = dns_run(refined, record_snapshots=False)
        computed = kinetic_energy(result.final)
        errors.append(abs(computed - exact))
        logger.debug(f"dt={dt:.3e}: energy error {errors[-1]:.3e}")

    errors = np.asarray(errors)
    monotone = bool(np.all(np.diff(errors) < 0.0))
    if not monotone:
        logger.warning(f"Energy errors are not monotone under dt refinement: {errors.tolist()}")

    rate = float(np.polyfit(np.log(dts), np.log(np.maximum(errors, np.finfo(float).tiny)), 1)[0])
    logger.info(f"Temporal order ({config.stepper.value}): fitted rate {rate:.3f}")
    return OrderCheckResult(dts=dts, errors=errors, rate=rate, monotone=monotone)
