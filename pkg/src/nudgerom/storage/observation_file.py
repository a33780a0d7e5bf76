# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from typing import Optional
from typing import Tuple

from nudgerom.observation.coarse_mesh import CoarseMesh
from nudgerom.observation.stream import ObservationStream
from nudgerom.observation.truth import TruthReference
from nudgerom.storage.codec import BinaryReader
from nudgerom.storage.codec import BinaryWriter
from nudgerom.storage.codec import read_bytes
from nudgerom.storage.codec import write_bytes
from nudgerom.storage.snapshot_file import read_grid
from nudgerom.storage.snapshot_file import write_grid
from nudgerom.util.exception_handlers.errors import ConfigurationError

logger = logging.getLogger(__name__)

OBSERVATION_MAGIC = b"DAROM-OBS\x00"


def encode_observations(stream: ObservationStream, truth: Optional[TruthReference] = None) -> bytes:
    """
    Layout: magic, version, grid (nx, ny u64; lx, ly, dealias fraction f64), H (f64), cells cx, cy (u64),
    time offset, noise std (f64), N (u64), N times, N x 2 x cx x cy cell means, N true energies, truth flag
    (u16), and when the flag is set the basis hash, d (u64), N squared truth norms and N x d truth coefficients;
    provenance trailer.
    """
    mesh = stream.mesh
    cx, cy = mesh.cell_shape
    writer = write_grid(BinaryWriter(OBSERVATION_MAGIC), mesh.grid)
    writer.f64(mesh.H).u64(cx).u64(cy).f64(stream.time_offset).f64(stream.noise_std)
    writer.u64(stream.count).array(stream.times).array(stream.coarse_values).array(stream.true_energy)
    if truth is None:
        writer.u16(0)
    else:
        if truth.count != stream.count:
            raise ConfigurationError(f"Truth reference has {truth.count} entries for {stream.count} observations")
        d = truth.coefficients.shape[1]
        writer.u16(1).digest(truth.basis_provenance).u64(d).array(truth.norms_sq).array(truth.coefficients)
    return writer.finish(stream.provenance)


def decode_observations(
    data: bytes, source: str = "<bytes>"
) -> Tuple[ObservationStream, Optional[TruthReference]]:
    reader = BinaryReader(data, OBSERVATION_MAGIC, source)
    grid = read_grid(reader)
    H = reader.f64()
    cells = (reader.u64(), reader.u64())
    mesh = CoarseMesh(grid, H)
    if mesh.cell_shape != cells:
        raise ConfigurationError(f"'{source}' declares cells {cells} but H={H} gives {mesh.cell_shape}")
    time_offset, noise_std = reader.f64(), reader.f64()
    count = reader.u64()
    times = reader.array((count,))
    coarse_values = reader.array((count, 2) + cells)
    true_energy = reader.array((count,))

    truth = None
    if reader.u16():
        basis_provenance = reader.digest()
        d = reader.u64()
        norms_sq = reader.array((count,))
        coefficients = reader.array((count, d))
        truth = TruthReference(
            times=times, norms_sq=norms_sq, coefficients=coefficients, basis_provenance=basis_provenance
        )
    reader.finish()

    stream = ObservationStream(
        times=times,
        coarse_values=coarse_values,
        true_energy=true_energy,
        mesh=mesh,
        time_offset=time_offset,
        provenance=reader.provenance,
        noise_std=noise_std,
    )
    return stream, truth


def write_observation_file(path: str, stream: ObservationStream, truth: Optional[TruthReference] = None) -> None:
    write_bytes(path, encode_observations(stream, truth))
    logger.info(
        f"Wrote {stream.count} observations on {stream.mesh.cell_count} cells to {path}"
        f"{' with truth reference' if truth is not None else ''}"
    )


def read_observation_file(path: str) -> Tuple[ObservationStream, Optional[TruthReference]]:
    return decode_observations(read_bytes(path), source=path)
