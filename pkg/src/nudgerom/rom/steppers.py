# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Implicit DA-ROM time steppers.

Both steppers solve

    c a + N(a) a + nu S a + mu G a = rhs

for the new coefficients by Picard iteration on the convecting field. Backward Euler uses c = 1/dt and
rhs = a^n/dt + f + mu obs_proj(t^{n+1}); BDF2 uses c = 3/(2 dt) and rhs = (4 a^n - a^{n-1})/(2 dt) + f +
mu obs_proj(t^{n+1}). When mu == 0 the nudging terms are skipped entirely, so the plain Galerkin ROM is
reproduced bit for bit.
"""

import logging
from typing import List
from typing import Optional
from typing import Tuple

import numpy as np
import scipy.linalg

from nudgerom.rom.operators import RomOperators
from nudgerom.rom.state import DaRunState
from nudgerom.schemas.da_config_schema import PicardSchema
from nudgerom.schemas.dns_config_schema import StepperEnum
from nudgerom.util.exception_handlers.errors import BlowUpError
from nudgerom.util.exception_handlers.errors import PreconditionError
from nudgerom.util.exception_handlers.errors import StagnationError

logger = logging.getLogger(__name__)


def picard_solve(
    ops: RomOperators,
    diagonal: float,
    rhs: np.ndarray,
    guess: np.ndarray,
    mu: float,
    picard: PicardSchema,
    step: int = 0,
) -> Tuple[np.ndarray, List[float]]:
    """
    Fixed-point solve of (diagonal I + N(a) + nu S + mu G) a = rhs.

    Converged when ||a_{k+1} - a_k|| <= tol * max(1, ||a_{k+1}||).

    Returns
    -------
    tuple
        The solution and the update norms of every iteration.

    Raises
    ------
    StagnationError
        After `picard.max_iters` iterations without convergence; carries the update norms.
    BlowUpError
        If an iterate stops being finite.
    """
    linear = diagonal * np.eye(ops.r) + ops.nu * ops.S
    if mu != 0.0:
        linear = linear + mu * ops.G

    a = np.array(guess, dtype=np.float64)
    history: List[float] = []
    for _ in range(picard.max_iters):
        a_next = scipy.linalg.solve(linear + ops.convection_matrix(a), rhs)
        if not np.all(np.isfinite(a_next)):
            raise BlowUpError("Non-finite ROM coefficients in Picard iteration", step)
        update = float(np.linalg.norm(a_next - a))
        history.append(update)
        a = a_next
        if update <= picard.tol * max(1.0, float(np.linalg.norm(a))):
            return a, history
    raise StagnationError(
        f"Picard iteration did not converge in {picard.max_iters} iterations at step {step} "
        f"(last update {history[-1]:.3e})",
        history,
    )


def _forcing_rhs(ops: RomOperators, history_term: np.ndarray, mu: float, obs: Optional[np.ndarray]) -> np.ndarray:
    rhs = history_term + ops.f_vec
    if mu != 0.0:
        if obs is None:
            raise PreconditionError("Nudged steps need an observation at the new time level")
        rhs = rhs + mu * ops.obs_proj(obs)
    return rhs


def step_backward_euler(
    ops: RomOperators,
    state: DaRunState,
    obs: Optional[np.ndarray] = None,
    picard: PicardSchema = PicardSchema(),
) -> DaRunState:
    """
    One backward Euler step.

    Parameters
    ----------
    ops : RomOperators
    state : DaRunState
    obs : np.ndarray, optional
        Cell means I_H u(t^{n+1}), shape (2, cx, cy); required when `state.mu > 0`.
    picard : PicardSchema, optional

    Returns
    -------
    DaRunState
    """
    dt = state.dt
    rhs = _forcing_rhs(ops, state.a / dt, state.mu, obs)
    a_next, history = picard_solve(ops, 1.0 / dt, rhs, state.a, state.mu, picard, state.step + 1)
    return state.advanced(a_next, len(history))


def step_bdf2(
    ops: RomOperators,
    state: DaRunState,
    obs: Optional[np.ndarray] = None,
    picard: PicardSchema = PicardSchema(),
) -> DaRunState:
    """One BDF2 step; the first step of a run falls back to backward Euler."""
    if state.a_prev is None:
        return step_backward_euler(ops, state, obs, picard)
    dt = state.dt
    rhs = _forcing_rhs(ops, (4.0 * state.a - state.a_prev) / (2.0 * dt), state.mu, obs)
    guess = 2.0 * state.a - state.a_prev
    a_next, history = picard_solve(ops, 1.5 / dt, rhs, guess, state.mu, picard, state.step + 1)
    return state.advanced(a_next, len(history))


STEPPERS = {
    StepperEnum.backward_euler: step_backward_euler,
    StepperEnum.bdf2: step_bdf2,
}


def stepper_for(stepper: StepperEnum):
    return STEPPERS[StepperEnum(stepper)]
