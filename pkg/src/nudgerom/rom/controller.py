# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging

import numpy as np

from nudgerom.rom.operators import RomOperators
from nudgerom.rom.state import DaRunState
from nudgerom.schemas.da_config_schema import AdaptiveSchema

logger = logging.getLogger(__name__)


def compute_dat(ops: RomOperators, a: np.ndarray, obs: np.ndarray) -> float:
    """
    DAT = ||I_H u_r||^2 - ||I_H u||^2 + ||I_H (u_r - u)||^2, evaluated from cell means.

    Parameters
    ----------
    ops : RomOperators
    a : np.ndarray
        ROM coefficients, length r.
    obs : np.ndarray
        Observed cell means I_H u, shape (2, cx, cy).
    """
    model_sq = float(a @ ops.G @ a)
    observed_sq = ops.observed_norm_sq(obs)
    return model_sq - observed_sq + observation_misfit(ops, a, obs) ** 2


def observation_misfit(ops: RomOperators, a: np.ndarray, obs: np.ndarray) -> float:
    """||I_H (u_r - u)||."""
    value = float(a @ ops.G @ a) - 2.0 * float(a @ ops.obs_proj(obs)) + ops.observed_norm_sq(obs)
    return float(np.sqrt(max(value, 0.0)))


def adaptive_update(
    state: DaRunState,
    ops: RomOperators,
    obs: np.ndarray,
    true_energy: float,
    settings: AdaptiveSchema,
) -> float:
    """
    The new nudging parameter after one controller check.

    Inside the dead band |E_rom - E_true| <= energy_band * E_true, mu is kept. When the ROM energy is too
    large, mu grows by `mu_step` if DAT > 0 and shrinks otherwise; when it is too small the rule is reversed.
    The result is clamped to [mu_min, mu_max].
    """
    energy_rom = state.energy
    if abs(energy_rom - true_energy) <= settings.energy_band * abs(true_energy):
        return state.mu

    dat = compute_dat(ops, state.a, obs)
    direction = 1.0 if dat > 0.0 else -1.0
    if energy_rom < true_energy:
        direction = -direction
    mu = min(max(state.mu + direction * settings.mu_step, settings.mu_min), settings.mu_max)
    logger.debug(
        f"Adaptive check at step {state.step}: E_rom={energy_rom:.6e}, E_true={true_energy:.6e}, "
        f"DAT={dat:.3e}, mu {state.mu:g} -> {mu:g}"
    )
    return mu


def check_admissibility(ops: RomOperators, mu: float) -> bool:
    """Warns when mu H^2 >= nu; the run proceeds either way."""
    if ops.admissible(mu):
        return True
    logger.warning(
        f"mu H^2 = {mu * ops.H**2:.4g} >= nu = {ops.nu:.4g}; outside the region covered by the convergence estimate"
    )
    return False
