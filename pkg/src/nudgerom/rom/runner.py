# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from dataclasses import dataclass
from typing import Dict
from typing import Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from nudgerom.observation.stream import ObservationStream
from nudgerom.observation.truth import TruthReference
from nudgerom.rom.controller import adaptive_update
from nudgerom.rom.controller import check_admissibility
from nudgerom.rom.controller import compute_dat
from nudgerom.rom.operators import RomOperators
from nudgerom.rom.state import DaRunState
from nudgerom.rom.steppers import stepper_for
from nudgerom.schemas.da_config_schema import DaConfigSchema
from nudgerom.schemas.da_config_schema import RomInitialConditionEnum
from nudgerom.storage.diagnostics_file import frame_to_csv_text
from nudgerom.storage.diagnostics_file import write_frame_csv
from nudgerom.util.converters.provenance import provenance_hash
from nudgerom.util.exception_handlers.errors import BlowUpError
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import PreconditionError
from nudgerom.util.tracing.latency import latency_logger

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RunResult:
    """
    Trajectory and diagnostics of one DA-ROM run.

    Attributes
    ----------
    times : np.ndarray
        DA times t^0..t^N.
    coefficients : np.ndarray
        Shape (N + 1, r).
    diagnostics : pd.DataFrame
        One row per step, including step 0.
    final_state : DaRunState
    max_norm : float
        sup_n ||u_r^n||.
    header : dict
        Provenance lines written in front of the diagnostics CSV.
    adaptive : bool
    """

    times: np.ndarray
    coefficients: np.ndarray
    diagnostics: pd.DataFrame
    final_state: DaRunState
    max_norm: float
    header: Dict[str, object]
    adaptive: bool = False

    @property
    def mu_history(self) -> np.ndarray:
        return self.diagnostics["mu"].to_numpy()

    @property
    def final_error(self) -> float:
        """L2 error at the last step; NaN without a truth reference."""
        return float(self.diagnostics["l2_error"].iloc[-1])

    @property
    def time_averaged_error(self) -> float:
        return float(self.diagnostics["l2_error"].iloc[1:].mean())

    @property
    def time_averaged_energy_error(self) -> float:
        frame = self.diagnostics.iloc[1:]
        return float(np.mean(np.abs(frame["energy_rom"] - frame["energy_true"])))

    @property
    def time_averaged_relative_energy_error(self) -> float:
        frame = self.diagnostics.iloc[1:]
        return float(np.mean(np.abs(frame["energy_rom"] - frame["energy_true"]) / frame["energy_true"]))

    def csv_text(self) -> str:
        return frame_to_csv_text(self.diagnostics, self.header)

    def to_csv(self, path: str) -> None:
        write_frame_csv(path, self.diagnostics, self.header)


def _check_inputs(
    ops: RomOperators, config: DaConfigSchema, stream: Optional[ObservationStream], truth: Optional[TruthReference]
) -> None:
    if config.r is not None and config.r != ops.r:
        raise ConfigurationError(f"Config asks for r={config.r} but the operators have r={ops.r}")
    if stream is None and (config.mu0 > 0.0 or config.is_adaptive):
        raise ConfigurationError("Nudged and adaptive runs need an observation stream")
    if stream is not None and (stream.mesh.cell_shape != ops.cell_shape or abs(stream.mesh.H - ops.H) > 1e-12 * ops.H):
        raise ConfigurationError(
            f"Observations on cells {stream.mesh.cell_shape} (H={stream.mesh.H:.6g}) do not match the operators' "
            f"cells {ops.cell_shape} (H={ops.H:.6g})"
        )
    if truth is not None:
        truth.require_basis(ops.basis_provenance)
    if config.initial_condition == RomInitialConditionEnum.projected and truth is None:
        raise PreconditionError("A projected initial condition needs a truth reference")


def _header(
    ops: RomOperators, config: DaConfigSchema, stream: Optional[ObservationStream], truth: Optional[TruthReference]
) -> Dict[str, object]:
    header: Dict[str, object] = {
        "config_hash": provenance_hash(config),
        "operators": ops.provenance,
        "basis": ops.basis_provenance,
        "observations": stream.provenance if stream is not None else "none",
        "truth_basis": truth.basis_provenance if truth is not None else "none",
        "r": ops.r,
        "mu0": repr(float(config.mu0)),
        "mu": "adaptive" if config.is_adaptive else repr(float(config.mu0)),
        "stepper": config.stepper.value,
        "dt": repr(float(config.dt)),
        "t_end": repr(float(config.t_end)),
        "nu": repr(ops.nu),
        "H": repr(ops.H),
    }
    return header


@latency_logger(name="darom_run")
def run(
    ops: RomOperators,
    config: DaConfigSchema,
    stream: Optional[ObservationStream] = None,
    truth: Optional[TruthReference] = None,
    progress: bool = False,
) -> RunResult:
    """
    Integrates the DA-ROM from t = 0 to `config.t_end`.

    Parameters
    ----------
    ops : RomOperators
    config : DaConfigSchema
    stream : ObservationStream, optional
        Observations at every step time 0, dt, ..., t_end; required when mu0 > 0 or the controller is on.
    truth : TruthReference, optional
        Enables the l2_error column and the projected initial condition.
    progress : bool, optional
        Show a tqdm progress bar.

    Returns
    -------
    RunResult

    Raises
    ------
    ConfigurationError
        When observations are missing, misaligned with the steps, or on another mesh.
    PreconditionError
        When a projected start is requested without a truth reference, or the truth belongs to another basis.
    BlowUpError
        When the coefficients stop being finite or exceed `config.blowup_norm`.
    StagnationError
        When a Picard solve does not converge.
    """
    _check_inputs(ops, config, stream, truth)
    n_steps = config.n_steps
    dt = config.dt
    obs_index = stream.require_steps(dt, n_steps) if stream is not None else None
    truth_index = truth.require_steps(dt, n_steps) if truth is not None else None

    def observation(n: int) -> Optional[np.ndarray]:
        return None if stream is None else stream.coarse_values[obs_index[n]]

    def true_energy(n: int) -> float:
        if stream is not None:
            return float(stream.true_energy[obs_index[n]])
        if truth is not None:
            return float(truth.energies[truth_index[n]])
        return float("nan")

    if config.initial_condition == RomInitialConditionEnum.projected:
        a0 = truth.projection(truth_index[0], ops.r)
    else:
        a0 = np.zeros(ops.r)
    state = DaRunState.initial(a0, config.mu0, dt)
    admissible = check_admissibility(ops, state.mu) if state.mu > 0.0 else True

    step = stepper_for(config.stepper)
    coefficients = np.empty((n_steps + 1, ops.r))
    max_norm = 0.0

    def accept(current: DaRunState, mu_used: float) -> None:
        nonlocal max_norm
        n = current.step
        if not np.all(np.isfinite(current.a)):
            raise BlowUpError("Non-finite ROM coefficients", n)
        norm = current.norm
        if config.blowup_norm is not None and norm > config.blowup_norm:
            raise BlowUpError(f"||a|| = {norm:.6g} exceeds blowup_norm={config.blowup_norm}", n)
        max_norm = max(max_norm, norm)
        coefficients[n] = current.a
        obs = observation(n)
        current.diagnostics.record(
            step=n,
            time=current.time,
            mu=mu_used,
            energy_rom=current.energy,
            energy_true=true_energy(n),
            l2_error=np.sqrt(truth.error_sq(truth_index[n], current.a)) if truth is not None else np.nan,
            dat=compute_dat(ops, current.a, obs) if obs is not None else np.nan,
        )

    logger.info(
        f"DA-ROM: r={ops.r}, mu0={config.mu0:g}{' (adaptive)' if config.is_adaptive else ''}, dt={dt}, "
        f"steps={n_steps}, stepper={config.stepper.value}"
    )
    accept(state, state.mu)
    for n in tqdm(range(n_steps), desc="darom", disable=not progress):
        mu_used = state.mu
        state = step(ops, state, observation(n + 1), config.nonlinear)
        accept(state, mu_used)

        if config.is_adaptive and state.step % config.adaptive.check_stride == 0:
            obs = observation(state.step)
            mu = adaptive_update(state, ops, obs, true_energy(state.step), config.adaptive)
            dat_sign = int(np.sign(compute_dat(ops, state.a, obs)))
            state = state.with_mu(mu, dat_sign, adjusted=mu != state.mu)
            if admissible and mu > 0.0:
                admissible = check_admissibility(ops, mu)
        if state.step % 1000 == 0:
            logger.debug(f"DA-ROM step {state.step}: energy={state.energy:.6e}, mu={state.mu:g}")

    diagnostics = state.diagnostics.to_frame()
    result = RunResult(
        times=np.arange(n_steps + 1) * dt,
        coefficients=coefficients,
        diagnostics=diagnostics,
        final_state=state,
        max_norm=max_norm,
        header=_header(ops, config, stream, truth),
        adaptive=config.is_adaptive,
    )
    logger.info(
        f"DA-ROM finished: final energy {state.energy:.6e}, sup ||u_r|| {max_norm:.6e}, "
        f"final error {result.final_error:.6e}"
    )
    return result


def galerkin_rom(
    ops: RomOperators,
    config: DaConfigSchema,
    truth: Optional[TruthReference] = None,
    progress: bool = False,
) -> RunResult:
    """The plain Galerkin ROM: the same steppers with mu = 0 and no observations."""
    plain = config.copy(update={"mu0": 0.0, "adaptive": None})
    return run(ops, plain, stream=None, truth=truth, progress=progress)
