# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging

from nudgerom.dns.snapshots import SnapshotSet
from nudgerom.fields.grid import Grid
from nudgerom.storage.codec import BinaryReader
from nudgerom.storage.codec import BinaryWriter
from nudgerom.storage.codec import read_bytes
from nudgerom.storage.codec import write_bytes

logger = logging.getLogger(__name__)

SNAPSHOT_MAGIC = b"DAROM-SNAP\x00"


def write_grid(writer: BinaryWriter, grid: Grid) -> BinaryWriter:
    return writer.u64(grid.nx).u64(grid.ny).f64(grid.lx).f64(grid.ly).f64(grid.dealias_fraction)


def read_grid(reader: BinaryReader) -> Grid:
    nx, ny = reader.u64(), reader.u64()
    lx, ly, dealias_fraction = reader.f64(), reader.f64(), reader.f64()
    return Grid(nx=nx, ny=ny, lx=lx, ly=ly, dealias_fraction=dealias_fraction)


def encode_snapshots(snapshots: SnapshotSet) -> bytes:
    """
    Layout: magic, version, nx, ny (u64), lx, ly, dealias fraction (f64), M (u64), M times, M x 2 x nx x ny field
    values, provenance.
    """
    writer = write_grid(BinaryWriter(SNAPSHOT_MAGIC), snapshots.grid)
    writer.u64(snapshots.count).array(snapshots.times).array(snapshots.values)
    return writer.finish(snapshots.provenance)


def decode_snapshots(data: bytes, source: str = "<bytes>") -> SnapshotSet:
    reader = BinaryReader(data, SNAPSHOT_MAGIC, source)
    grid = read_grid(reader)
    count = reader.u64()
    times = reader.array((count,))
    values = reader.array((count, 2) + grid.shape)
    reader.finish()
    return SnapshotSet(times=times, values=values, grid=grid, provenance=reader.provenance)


def write_snapshot_file(path: str, snapshots: SnapshotSet) -> None:
    write_bytes(path, encode_snapshots(snapshots))
    logger.info(f"Wrote {snapshots.count} snapshots to {path}")


def read_snapshot_file(path: str) -> SnapshotSet:
    return decode_snapshots(read_bytes(path), source=path)
