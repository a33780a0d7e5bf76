# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
End-to-end artifact preparation shared by all experiments.

1. The truth DNS runs through its spin-up and records the snapshot window.
2. POD bases are built from the (optionally partial-period) snapshot windows.
3. The truth is continued from the first snapshot over the DA horizon; coarse observations and the truth
   reference of every basis are recorded on the fly at the DA step times, so DA time 0 is the first snapshot time.
"""

import logging
from dataclasses import dataclass
from typing import Dict
from typing import Iterable
from typing import List
from typing import Optional

from nudgerom.dns.forcing import build_forcing
from nudgerom.dns.snapshots import SnapshotSet
from nudgerom.dns.solver import DnsResult
from nudgerom.dns.solver import dns_run
from nudgerom.fields.velocity import VelocityField
from nudgerom.observation.coarse_mesh import CoarseMesh
from nudgerom.observation.stream import ObservationRecorder
from nudgerom.observation.stream import ObservationStream
from nudgerom.observation.truth import TruthReference
from nudgerom.pod.basis import PodBasis
from nudgerom.pod.basis import build_pod
from nudgerom.pod.windowing import windowed_snapshots
from nudgerom.rom.operators import RomOperators
from nudgerom.rom.operators import assemble
from nudgerom.schemas.experiment_config_schema import ExperimentConfigSchema
from nudgerom.schemas.pod_schema import PodSchema
from nudgerom.util.converters.provenance import provenance_hash
from nudgerom.util.exception_handlers.errors import PreconditionError
from nudgerom.util.tracing.latency import latency_logger

logger = logging.getLogger(__name__)

FULL_WINDOW = 1.0


@dataclass(frozen=True, eq=False)
class Artifacts:
    """
    Everything the DA-ROM experiments consume.

    `bases` and `truths` are keyed by window fraction; `basis` and `truth` are the ones of the configured
    `pod.window_fraction` (the full snapshot window when unset).
    """

    config: ExperimentConfigSchema
    snapshots: SnapshotSet
    mesh: CoarseMesh
    forcing: VelocityField
    stream: ObservationStream
    bases: Dict[float, PodBasis]
    truths: Dict[float, TruthReference]
    default_fraction: float

    @property
    def basis(self) -> PodBasis:
        return self.bases[self.default_fraction]

    @property
    def truth(self) -> TruthReference:
        return self.truths[self.default_fraction]

    @property
    def nu(self) -> float:
        return self.config.dns.nu

    def operators(self, r: int, fraction: Optional[float] = None) -> RomOperators:
        basis = self.basis if fraction is None else self.bases[fraction]
        return assemble(basis, r, self.mesh, self.forcing, nu=self.nu)

    def provenance(self, fraction: Optional[float] = None) -> Dict[str, str]:
        basis = self.basis if fraction is None else self.bases[fraction]
        return {
            "config": provenance_hash(self.config),
            "snapshots": self.snapshots.provenance,
            "basis": basis.provenance,
            "observations": self.stream.provenance,
        }


def basis_from_snapshots(snapshots: SnapshotSet, pod: PodSchema, window_fraction: Optional[float] = None) -> PodBasis:
    """POD basis of the snapshots, restricted to the first `window_fraction` of a period when given."""
    fraction = pod.window_fraction if window_fraction is None else window_fraction
    if fraction is not None and fraction < FULL_WINDOW:
        snapshots = windowed_snapshots(snapshots, fraction, period=pod.period)
    return build_pod(snapshots, rank_tol=pod.rank_tol, max_modes=pod.max_modes, center=pod.center)


def truth_run(config: ExperimentConfigSchema, progress: bool = False) -> DnsResult:
    """Spin-up and snapshot window of the truth DNS."""
    return dns_run(config.dns, progress=progress)


def observe_da_horizon(
    config: ExperimentConfigSchema,
    truth: DnsResult,
    mesh: CoarseMesh,
    bases: Iterable[PodBasis] = (),
    progress: bool = False,
):
    """
    Continues the truth from its first snapshot over [t0, t0 + darom.t_end].

    Returns
    -------
    tuple
        The observation stream and one truth reference per basis, in the order given.

    Raises
    ------
    ConfigurationError
        If the DA step is not an integer multiple of the DNS step.
    """
    if truth.window_state is None:
        raise PreconditionError("The truth run recorded no snapshot window to continue from")
    start = truth.window_state
    darom = config.darom
    recorders: List[ObservationRecorder] = [
        ObservationRecorder(mesh, start.time, darom.dt, darom.n_steps, basis=basis) for basis in bases
    ]
    if not recorders:
        recorders.append(ObservationRecorder(mesh, start.time, darom.dt, darom.n_steps))

    def observe(step, t, velocity):
        for recorder in recorders:
            recorder(step, t, velocity)

    dns_run(
        config.dns,
        start_state=start,
        observer=observe,
        t_end=start.time + darom.t_end,
        record_snapshots=False,
        progress=progress,
    )
    stream = recorders[0].stream(
        truth.provenance, noise_std=config.observation.noise_std, noise_seed=config.observation.noise_seed
    )
    references = [recorder.truth_reference() for recorder in recorders if recorder.basis is not None]
    return stream, references


@latency_logger(name="prepare_artifacts")
def prepare_artifacts(
    config: ExperimentConfigSchema,
    window_fractions: Optional[Iterable[float]] = None,
    progress: bool = False,
) -> Artifacts:
    """
    Runs the truth DNS, builds the POD bases and records observations and truth references over the DA horizon.

    Parameters
    ----------
    config : ExperimentConfigSchema
    window_fractions : iterable of float, optional
        Extra partial-period windows to build bases for, in addition to the configured one.
    progress : bool, optional

    Returns
    -------
    Artifacts
    """
    result = truth_run(config, progress=progress)
    snapshots = result.snapshots
    grid = snapshots.grid
    mesh = CoarseMesh(grid, config.observation.resolve_H(grid.lx))
    forcing = build_forcing(config.dns.forcing, grid)

    default_fraction = config.pod.window_fraction or FULL_WINDOW
    fractions = [default_fraction]
    for fraction in window_fractions or ():
        if fraction not in fractions:
            fractions.append(fraction)
    bases = {fraction: basis_from_snapshots(snapshots, config.pod, fraction) for fraction in fractions}

    stream, references = observe_da_horizon(config, result, mesh, bases.values(), progress=progress)
    truths = dict(zip(fractions, references))
    logger.info(
        f"Prepared artifacts: {snapshots.count} snapshots, bases for window fractions {fractions}, "
        f"{stream.count} observations on {mesh.cell_count} cells"
    )
    return Artifacts(
        config=config,
        snapshots=snapshots,
        mesh=mesh,
        forcing=forcing,
        stream=stream,
        bases=bases,
        truths=truths,
        default_fraction=default_fraction,
    )
