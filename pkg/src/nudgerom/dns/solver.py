# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Pseudo-spectral solver for the 2D incompressible Navier-Stokes equations on a periodic box.

Time stepping is IMEX: the viscous term is implicit (diagonal in Fourier space), the skew-symmetric advection term
is explicit and evaluated at the extrapolated velocity 2u^n - u^(n-1). BDF2 is bootstrapped with one backward
Euler step. Pressure is eliminated by Leray projection of the explicit terms.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable
from typing import List
from typing import Optional

import numpy as np
from tqdm import tqdm

from nudgerom.dns.forcing import build_forcing
from nudgerom.dns.initial_conditions import build_initial_condition
from nudgerom.dns.snapshots import SnapshotSet
from nudgerom.fields.grid import Grid
from nudgerom.fields.operators import leray_project_spectral
from nudgerom.fields.velocity import VelocityField
from nudgerom.schemas.dns_config_schema import DnsConfigSchema
from nudgerom.schemas.dns_config_schema import SpinupSchema
from nudgerom.schemas.dns_config_schema import SpinupTypeEnum
from nudgerom.schemas.dns_config_schema import StepperEnum
from nudgerom.util.converters.provenance import provenance_hash
from nudgerom.util.exception_handlers.errors import BlowUpError
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import DimensionError
from nudgerom.util.exception_handlers.errors import PeriodDetectionError
from nudgerom.util.exception_handlers.errors import PreconditionError
from nudgerom.util.signal.periodicity import is_statistically_periodic
from nudgerom.util.tracing.latency import latency_logger

logger = logging.getLogger(__name__)

StepObserver = Callable[[int, float, VelocityField], None]


@dataclass(frozen=True, eq=False)
class DnsState:
    """
    Two-level solver state, enough to continue a BDF2 trajectory exactly.

    `u_hat_prev` is None before the first step, which is then taken with backward Euler.
    """

    u_hat: np.ndarray
    u_hat_prev: Optional[np.ndarray]
    step: int
    dt: float

    @property
    def time(self) -> float:
        return self.step * self.dt

    def velocity(self, grid: Grid) -> VelocityField:
        return VelocityField.from_spectral(self.u_hat, grid)


@dataclass(frozen=True, eq=False)
class DnsResult:
    snapshots: Optional[SnapshotSet]
    final: VelocityField
    final_state: DnsState
    window_state: Optional[DnsState]
    energy_times: np.ndarray
    energy_history: np.ndarray
    provenance: str


class DnsSolver:
    """
    One IMEX time step of the pseudo-spectral NSE.

    Parameters
    ----------
    grid : Grid
    nu : float
        Kinematic viscosity.
    dt : float
        Time step.
    stepper : StepperEnum
        `bdf2` (backward Euler on the first step) or `backward_euler`.
    forcing : VelocityField
        Autonomous body force; its gradient part is projected out.
    """

    def __init__(self, grid: Grid, nu: float, dt: float, stepper: StepperEnum, forcing: VelocityField):
        grid.require_same(forcing.grid)
        self.grid = grid
        self.nu = nu
        self.dt = dt
        self.stepper = stepper
        self.f_hat = leray_project_spectral(forcing.spectral(), grid)
        self._be_denominator = 1.0 + nu * dt * grid.laplacian_symbol
        self._bdf2_denominator = 3.0 + 2.0 * nu * dt * grid.laplacian_symbol

    def nonlinear(self, u_hat: np.ndarray) -> np.ndarray:
        """
        Projected, dealiased skew-symmetric advection 1/2 (u . grad) u + 1/2 div(u u) in spectral space.
        """
        grid = self.grid
        mask = grid.dealias_mask
        kx, ky = grid.wavenumbers

        u_hat = u_hat * mask
        u = grid.to_physical(u_hat)
        grad_u = grid.to_physical(np.stack([1j * kx * u_hat, 1j * ky * u_hat], axis=-3))
        convective = np.einsum("jxy,ijxy->ixy", u, grad_u)

        flux_hat = grid.to_spectral(u[:, None, :, :] * u[None, :, :, :])
        divergence_hat = 1j * kx * flux_hat[:, 0] + 1j * ky * flux_hat[:, 1]

        n_hat = 0.5 * grid.to_spectral(convective) + 0.5 * divergence_hat
        return leray_project_spectral(n_hat * mask, grid)

    def advance(self, state: DnsState) -> DnsState:
        if state.u_hat_prev is None or self.stepper == StepperEnum.backward_euler:
            explicit = self.f_hat - self.nonlinear(state.u_hat)
            u_hat_next = (state.u_hat + self.dt * explicit) / self._be_denominator
        else:
            explicit = self.f_hat - self.nonlinear(2.0 * state.u_hat - state.u_hat_prev)
            u_hat_next = (4.0 * state.u_hat - state.u_hat_prev + 2.0 * self.dt * explicit) / self._bdf2_denominator
        return DnsState(u_hat=u_hat_next, u_hat_prev=state.u_hat, step=state.step + 1, dt=self.dt)


class _SnapshotWindow:
    """Decides at which steps snapshots are taken, following the spin-up settings."""

    def __init__(self, spinup: SpinupSchema, stride: int, dt: float, start_step: int):
        self.stride = stride
        self.dt = dt
        self.auto = spinup.type == SpinupTypeEnum.auto
        self.params = spinup.params
        self.open_step: Optional[int] = None
        self.close_step: Optional[int] = None
        if not self.auto:
            self.open_step = max(start_step, int(math.ceil(self.params.t_start / dt - 1e-9)))

    def update(self, step: int, energies: List[float]) -> None:
        if not self.auto or self.open_step is not None:
            return
        if step * self.dt < self.params.min_time - 1e-9 * self.dt or step % self.params.check_every != 0:
            return
        if is_statistically_periodic(energies[self._settled_index(energies, step) :], self.params.rel_tol):
            self.open_step = step
            self.close_step = step + int(round(self.params.window_length / self.dt))
            logger.info(f"Energy signal is statistically periodic at t={step * self.dt:.4f}; snapshot window opens.")

    def _settled_index(self, energies: List[float], step: int) -> int:
        first_step = step - (len(energies) - 1)
        min_step = int(math.ceil(self.params.min_time / self.dt - 1e-9))
        return max(0, min_step - first_step)

    def records(self, step: int) -> bool:
        if self.open_step is None or step < self.open_step:
            return False
        if self.close_step is not None and step > self.close_step:
            return False
        return (step - self.open_step) % self.stride == 0

    def finished(self, step: int) -> bool:
        return self.close_step is not None and step >= self.close_step


def initial_state(config: DnsConfigSchema) -> DnsState:
    grid = config.grid.to_grid()
    u0 = build_initial_condition(config.initial_condition, grid)
    return DnsState(u_hat=leray_project_spectral(u0.spectral(), grid), u_hat_prev=None, step=0, dt=config.dt)


def _check_start_state(state: DnsState, grid: Grid, dt: float) -> None:
    if state.u_hat.shape != (2,) + grid.spectral_shape:
        raise DimensionError(f"Start state of shape {state.u_hat.shape} does not live on grid {grid.shape}")
    if abs(state.dt - dt) > 1e-12 * dt:
        raise ConfigurationError(f"Start state was computed with dt={state.dt}, cannot continue with dt={dt}")


@latency_logger(name="dns_run")
def dns_run(
    config: DnsConfigSchema,
    start_state: Optional[DnsState] = None,
    observer: Optional[StepObserver] = None,
    t_end: Optional[float] = None,
    record_snapshots: bool = True,
    progress: bool = False,
) -> DnsResult:
    """
    Integrates the NSE and records snapshots inside the configured window.

    Parameters
    ----------
    config : DnsConfigSchema
        Solver settings; provenance of every output is the hash of this document.
    start_state : DnsState, optional
        Continue from this state instead of the configured initial condition.
    observer : callable, optional
        Called as `observer(step, t, velocity)` for the start state and after every step.
    t_end : float, optional
        Overrides `config.t_end`.
    record_snapshots : bool, optional
        If False, no snapshots are stored and the run always goes to `t_end`.
    progress : bool, optional
        Show a tqdm progress bar.

    Returns
    -------
    DnsResult

    Raises
    ------
    BlowUpError
        When the velocity stops being finite or the energy exceeds `config.blowup_energy`.
    DimensionError
        When a start state or file initial condition does not match the grid.
    PeriodDetectionError
        When an automatic spin-up never becomes statistically periodic.
    PreconditionError
        When fewer than two snapshots fall inside the window.
    """
    grid = config.grid.to_grid()
    solver = DnsSolver(grid, config.nu, config.dt, config.stepper, build_forcing(config.forcing, grid))
    provenance = provenance_hash(config)

    if start_state is None:
        state = initial_state(config)
    else:
        _check_start_state(start_state, grid, config.dt)
        state = start_state

    end_time = config.t_end if t_end is None else t_end
    n_end = int(round(end_time / config.dt))
    window = _SnapshotWindow(config.spinup, config.snapshot_stride, config.dt, state.step) if record_snapshots else None

    h = min(grid.hx, grid.hy)
    cfl_warned = False
    energies: List[float] = []
    times: List[float] = []
    snapshot_times: List[float] = []
    snapshot_values: List[np.ndarray] = []
    window_state: Optional[DnsState] = None

    def accept(current: DnsState) -> bool:
        nonlocal cfl_warned, window_state
        velocity = current.velocity(grid)
        if not velocity.is_finite():
            raise BlowUpError("Non-finite velocity in DNS", current.step)
        energy = 0.5 * grid.weight * float(np.sum(velocity.u1**2) + np.sum(velocity.u2**2))
        if config.blowup_energy is not None and energy > config.blowup_energy:
            raise BlowUpError(f"DNS energy {energy:.6g} exceeds blowup_energy={config.blowup_energy}", current.step)

        max_speed = velocity.max_speed()
        if not cfl_warned and max_speed > 0.0 and config.dt > config.cfl_safety * h / max_speed:
            logger.warning(
                f"CFL advisory: dt={config.dt:.3e} exceeds {config.cfl_safety} h / max|u| = "
                f"{config.cfl_safety * h / max_speed:.3e} at t={current.time:.4f}"
            )
            cfl_warned = True

        energies.append(energy)
        times.append(current.time)
        if observer is not None:
            observer(current.step, current.time, velocity)

        if window is None:
            return False
        window.update(current.step, energies)
        if window.records(current.step):
            if window_state is None:
                window_state = current
            snapshot_times.append(current.time)
            snapshot_values.append(velocity.stacked())
        return window.finished(current.step)

    logger.info(
        f"DNS: grid {grid.nx}x{grid.ny}, nu={config.nu}, dt={config.dt}, stepper={config.stepper.value}, "
        f"steps {state.step}..{n_end}"
    )
    done = accept(state)
    for _ in tqdm(range(state.step, n_end), desc="dns", disable=not progress):
        if done:
            break
        state = solver.advance(state)
        done = accept(state)
        if state.step % 1000 == 0:
            logger.debug(f"DNS step {state.step}: t={state.time:.4f}, energy={energies[-1]:.6e}")

    snapshots = None
    if record_snapshots:
        if window.auto and window.open_step is None:
            raise PeriodDetectionError(
                f"Energy did not become statistically periodic before t={end_time}; use a fixed spin-up instead"
            )
        if len(snapshot_times) < 2:
            raise PreconditionError(f"Snapshot window holds {len(snapshot_times)} snapshot(s); at least 2 are needed")
        snapshots = SnapshotSet(
            times=np.asarray(snapshot_times),
            values=np.stack(snapshot_values),
            grid=grid,
            provenance=provenance,
        )
        logger.info(f"DNS recorded {snapshots.count} snapshots on [{snapshot_times[0]:.4f}, {snapshot_times[-1]:.4f}]")

    return DnsResult(
        snapshots=snapshots,
        final=state.velocity(grid),
        final_state=state,
        window_state=window_state,
        energy_times=np.asarray(times),
        energy_history=np.asarray(energies),
        provenance=provenance,
    )
