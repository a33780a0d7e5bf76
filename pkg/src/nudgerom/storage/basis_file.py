# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging

from nudgerom.pod.basis import PodBasis
from nudgerom.storage.codec import BinaryReader
from nudgerom.storage.codec import BinaryWriter
from nudgerom.storage.codec import read_bytes
from nudgerom.storage.codec import write_bytes
from nudgerom.storage.snapshot_file import read_grid
from nudgerom.storage.snapshot_file import write_grid
from nudgerom.util.exception_handlers.errors import ConfigurationError

logger = logging.getLogger(__name__)

BASIS_MAGIC = b"DAROM-POD\x00"


def encode_basis(basis: PodBasis) -> bytes:
    """
    Layout: magic, version, normalization flag (u16), grid, d (u64), snapshot count (u64), total energy (f64),
    d eigenvalues, d gradient norms, d x d stiffness matrix, d x 2 x nx x ny modes, provenance.

    Centered bases are analysis-only and cannot be stored.
    """
    if basis.centered:
        raise ConfigurationError("Centered POD bases cannot be written to a basis file")
    writer = BinaryWriter(BASIS_MAGIC).u16(basis.normalization)
    write_grid(writer, basis.grid)
    writer.u64(basis.d).u64(basis.snapshot_count).f64(basis.total_energy)
    writer.array(basis.eigenvalues).array(basis.grad_norms).array(basis.stiffness).array(basis.mode_array)
    return writer.finish(basis.provenance)


def decode_basis(data: bytes, source: str = "<bytes>") -> PodBasis:
    reader = BinaryReader(data, BASIS_MAGIC, source)
    normalization = reader.u16()
    grid = read_grid(reader)
    d, snapshot_count, total_energy = reader.u64(), reader.u64(), reader.f64()
    eigenvalues = reader.array((d,))
    grad_norms = reader.array((d,))
    stiffness = reader.array((d, d))
    mode_array = reader.array((d, 2) + grid.shape)
    reader.finish()
    return PodBasis(
        mode_array=mode_array,
        eigenvalues=eigenvalues,
        grad_norms=grad_norms,
        stiffness=stiffness,
        grid=grid,
        total_energy=total_energy,
        snapshot_count=snapshot_count,
        mean=None,
        provenance=reader.provenance,
        normalization=normalization,
    )


def write_basis_file(path: str, basis: PodBasis) -> None:
    write_bytes(path, encode_basis(basis))
    logger.info(f"Wrote POD basis with d={basis.d} to {path}")


def read_basis_file(path: str) -> PodBasis:
    return decode_basis(read_bytes(path), source=path)
