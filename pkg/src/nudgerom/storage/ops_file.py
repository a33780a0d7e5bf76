# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging

from nudgerom.rom.operators import RomOperators
from nudgerom.storage.codec import BinaryReader
from nudgerom.storage.codec import BinaryWriter
from nudgerom.storage.codec import read_bytes
from nudgerom.storage.codec import write_bytes

logger = logging.getLogger(__name__)

OPERATORS_MAGIC = b"DAROM-OPS\x00"


def encode_operators(ops: RomOperators) -> bytes:
    """
    Layout: magic, version, r (u64), nu, H, cell area (f64), cells cx, cy (u64), basis hash, S (r x r),
    T (r x r x r), G (r x r), forcing vector (r), coarse modes (r x 2 x cx x cy), provenance.
    """
    cx, cy = ops.cell_shape
    writer = BinaryWriter(OPERATORS_MAGIC).u64(ops.r).f64(ops.nu).f64(ops.H).f64(ops.cell_area)
    writer.u64(cx).u64(cy).digest(ops.basis_provenance)
    writer.array(ops.S).array(ops.T).array(ops.G).array(ops.f_vec).array(ops.coarse_modes)
    return writer.finish(ops.provenance)


def decode_operators(data: bytes, source: str = "<bytes>") -> RomOperators:
    reader = BinaryReader(data, OPERATORS_MAGIC, source)
    r = reader.u64()
    nu, H, cell_area = reader.f64(), reader.f64(), reader.f64()
    cells = (reader.u64(), reader.u64())
    basis_provenance = reader.digest()
    S = reader.array((r, r))
    T = reader.array((r, r, r))
    G = reader.array((r, r))
    f_vec = reader.array((r,))
    coarse_modes = reader.array((r, 2) + cells)
    reader.finish()
    return RomOperators(
        r=r,
        S=S,
        T=T,
        G=G,
        f_vec=f_vec,
        coarse_modes=coarse_modes,
        nu=nu,
        H=H,
        cell_area=cell_area,
        basis_provenance=basis_provenance,
        provenance=reader.provenance,
    )


def write_operators_file(path: str, ops: RomOperators) -> None:
    write_bytes(path, encode_operators(ops))
    logger.info(f"Wrote ROM operators with r={ops.r} to {path}")


def read_operators_file(path: str) -> RomOperators:
    return decode_operators(read_bytes(path), source=path)
