# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from dataclasses import dataclass
from typing import List
from typing import Optional

import numpy as np

from nudgerom.dns.snapshots import SnapshotSet
from nudgerom.fields.velocity import VelocityField
from nudgerom.observation.coarse_mesh import CoarseField
from nudgerom.observation.coarse_mesh import CoarseMesh
from nudgerom.observation.truth import TruthReference
from nudgerom.pod.basis import PodBasis
from nudgerom.util.converters.provenance import derive_hash
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import DimensionError
from nudgerom.util.exception_handlers.errors import OutOfRangeError
from nudgerom.util.exception_handlers.errors import PreconditionError

logger = logging.getLogger(__name__)

TIME_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class ObservationSample:
    time: float
    coarse: CoarseField
    true_energy: float


@dataclass(frozen=True, eq=False)
class ObservationStream:
    """
    Coarse observations I_H u(t) and true energies 1/2 ||u(t)||^2 at the DA-ROM step times.

    Attributes
    ----------
    times : np.ndarray
        DA-ROM times, shape (N,); truth time is `time_offset + times`.
    coarse_values : np.ndarray
        Cell means, shape (N, 2, cx, cy).
    true_energy : np.ndarray
        Shape (N,).
    mesh : CoarseMesh
    time_offset : float
    provenance : str
    noise_std : float
    """

    times: np.ndarray
    coarse_values: np.ndarray
    true_energy: np.ndarray
    mesh: CoarseMesh
    time_offset: float
    provenance: str
    noise_std: float = 0.0

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64).reshape(-1)
        values = np.array(self.coarse_values, dtype=np.float64).reshape((times.size, 2) + self.mesh.cell_shape)
        energy = np.array(self.true_energy, dtype=np.float64).reshape(-1)
        if energy.shape != times.shape:
            raise DimensionError(f"{energy.size} true energies for {times.size} observation times")
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("Observation values must be finite")
        for array in (times, values, energy):
            array.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "coarse_values", values)
        object.__setattr__(self, "true_energy", energy)

    @property
    def count(self) -> int:
        return int(self.times.size)

    def index_of(self, time: float, scale: float = 1.0) -> int:
        """
        Index of the observation taken exactly at `time`.

        Raises
        ------
        ConfigurationError
            If no observation time matches (observations are never interpolated in time).
        """
        if self.count:
            index = int(np.argmin(np.abs(self.times - time)))
            if abs(self.times[index] - time) <= TIME_MATCH_TOL * max(1.0, abs(scale)):
                return index
        raise ConfigurationError(f"No observation at DA time {time:.12g}; observation times must align with steps")

    def sample(self, index: int) -> ObservationSample:
        return ObservationSample(
            time=float(self.times[index]),
            coarse=CoarseField(self.coarse_values[index], self.mesh),
            true_energy=float(self.true_energy[index]),
        )

    def at(self, time: float) -> ObservationSample:
        return self.sample(self.index_of(time))

    def require_steps(self, dt: float, n_steps: int) -> np.ndarray:
        """Stream indices of the observations at t = 0, dt, ..., n_steps dt."""
        return np.array([self.index_of(n * dt, scale=n_steps * dt) for n in range(n_steps + 1)], dtype=np.int64)


def _apply_noise(coarse_values: np.ndarray, noise_std: float, noise_seed: int) -> np.ndarray:
    if noise_std <= 0.0:
        return coarse_values
    rng = np.random.default_rng(noise_seed)
    return coarse_values + noise_std * rng.standard_normal(coarse_values.shape)


def _snapshot_indices(snapshots: SnapshotSet, da_times: np.ndarray, offset: float) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(snapshots.times))))
    slack = TIME_MATCH_TOL * scale
    indices = []
    for t in da_times:
        truth_time = offset + t
        if truth_time < snapshots.times[0] - slack or truth_time > snapshots.times[-1] + slack:
            raise OutOfRangeError(
                f"DA time {t} (truth time {truth_time}) outside the truth span "
                f"[{snapshots.times[0]}, {snapshots.times[-1]}]"
            )
        index = int(np.argmin(np.abs(snapshots.times - truth_time)))
        if abs(snapshots.times[index] - truth_time) > slack:
            raise ConfigurationError(f"DA time {t} does not coincide with a snapshot time")
        indices.append(index)
    return np.asarray(indices, dtype=np.int64)


def build_observation_stream(
    snapshots: SnapshotSet,
    mesh: CoarseMesh,
    da_times,
    time_offset: Optional[float] = None,
    noise_std: float = 0.0,
    noise_seed: int = 0,
) -> ObservationStream:
    """
    Observes stored snapshots at the requested DA times.

    Parameters
    ----------
    snapshots : SnapshotSet
        Truth trajectory; every requested time must coincide with a snapshot time.
    mesh : CoarseMesh
        Observation mesh on the snapshot grid.
    da_times : array_like
        DA-ROM times; may be empty.
    time_offset : float, optional
        Truth time of DA time 0. Defaults to the first snapshot time.
    noise_std, noise_seed : float, int
        Optional seeded additive Gaussian noise per cell; off by default.

    Returns
    -------
    ObservationStream

    Raises
    ------
    OutOfRangeError
        If a requested time lies outside the snapshot span.
    ConfigurationError
        If a requested time falls between snapshots.
    """
    mesh.grid.require_same(snapshots.grid)
    da_times = np.asarray(da_times, dtype=np.float64).reshape(-1)
    offset = float(snapshots.times[0]) if time_offset is None else float(time_offset)
    indices = _snapshot_indices(snapshots, da_times, offset)
    values = snapshots.values[indices]
    coarse_values = _apply_noise(mesh.cell_means_array(values), noise_std, noise_seed)
    true_energy = 0.5 * snapshots.grid.weight * np.sum(values**2, axis=(1, 2, 3))

    provenance = derive_hash(
        snapshots.provenance, H=mesh.H, time_offset=offset, times=da_times, noise_std=noise_std, noise_seed=noise_seed
    )
    logger.info(f"Observation stream: {da_times.size} times, {mesh.cell_count} cells of width H={mesh.H:.6g}")
    return ObservationStream(
        times=da_times,
        coarse_values=coarse_values,
        true_energy=true_energy,
        mesh=mesh,
        time_offset=offset,
        provenance=provenance,
        noise_std=noise_std,
    )


def truth_reference_from_snapshots(
    snapshots: SnapshotSet, basis: PodBasis, da_times, time_offset: Optional[float] = None
) -> TruthReference:
    """The truth reference of stored snapshots at the requested DA times (same alignment rules as the stream)."""
    basis.grid.require_same(snapshots.grid)
    da_times = np.asarray(da_times, dtype=np.float64).reshape(-1)
    offset = float(snapshots.times[0]) if time_offset is None else float(time_offset)
    indices = _snapshot_indices(snapshots, da_times, offset)
    return TruthReference.from_arrays(da_times, snapshots.values[indices], basis)


class ObservationRecorder:
    """
    DNS step observer that records coarse observations (and optionally a truth reference) at DA-ROM times.

    Parameters
    ----------
    mesh : CoarseMesh
    time_offset : float
        Truth time of DA time 0.
    da_dt : float
        DA-ROM time step; must be an integer multiple of the DNS step.
    n_steps : int
        Number of DA-ROM steps; observations are taken at DA times 0, da_dt, ..., n_steps da_dt.
    basis : PodBasis, optional
        When given, the truth reference against this basis is recorded too.
    """

    def __init__(
        self,
        mesh: CoarseMesh,
        time_offset: float,
        da_dt: float,
        n_steps: int,
        basis: Optional[PodBasis] = None,
    ):
        self.mesh = mesh
        self.time_offset = time_offset
        self.da_dt = da_dt
        self.n_steps = n_steps
        self.basis = basis
        self._times: List[float] = []
        self._coarse: List[np.ndarray] = []
        self._norms_sq: List[float] = []
        self._coefficients: List[np.ndarray] = []

    def __call__(self, step: int, t: float, velocity: VelocityField) -> None:
        da_time = t - self.time_offset
        ratio = da_time / self.da_dt
        n = int(round(ratio))
        if n < 0 or n > self.n_steps or abs(ratio - n) > 1e-6:
            return
        stacked = velocity.stacked()
        self._times.append(n * self.da_dt)
        self._coarse.append(self.mesh.cell_means_array(stacked))
        self._norms_sq.append(self.mesh.grid.weight * float(np.sum(stacked**2)))
        if self.basis is not None:
            self._coefficients.append(
                self.basis.grid.weight * self.basis.mode_array.reshape(self.basis.d, -1) @ stacked.reshape(-1)
            )

    @property
    def count(self) -> int:
        return len(self._times)

    def stream(self, parent_provenance: str, noise_std: float = 0.0, noise_seed: int = 0) -> ObservationStream:
        if self.count != self.n_steps + 1:
            raise ConfigurationError(
                f"Recorded {self.count} observations, expected {self.n_steps + 1}; "
                "the DA step must be an integer multiple of the DNS step"
            )
        times = np.asarray(self._times)
        coarse = _apply_noise(np.stack(self._coarse), noise_std, noise_seed)
        provenance = derive_hash(
            parent_provenance,
            H=self.mesh.H,
            time_offset=self.time_offset,
            dt=self.da_dt,
            n_steps=self.n_steps,
            noise_std=noise_std,
            noise_seed=noise_seed,
        )
        return ObservationStream(
            times=times,
            coarse_values=coarse,
            true_energy=0.5 * np.asarray(self._norms_sq),
            mesh=self.mesh,
            time_offset=self.time_offset,
            provenance=provenance,
            noise_std=noise_std,
        )

    def truth_reference(self) -> TruthReference:
        if self.basis is None:
            raise PreconditionError("ObservationRecorder was created without a basis; no truth reference recorded")
        return TruthReference(
            times=np.asarray(self._times),
            norms_sq=np.asarray(self._norms_sq),
            coefficients=np.stack(self._coefficients).reshape(self.count, self.basis.d),
            basis_provenance=self.basis.provenance,
        )
