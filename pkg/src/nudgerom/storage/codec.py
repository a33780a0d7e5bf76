# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Little-endian binary layout shared by the nudgerom artifact files.

Every file is `magic | version (u16) | body | provenance (64 ASCII hex characters)`. Integers are unsigned
little-endian, floats and arrays are little-endian IEEE-754 doubles in row-major order.
"""

import logging
import string
import struct
from typing import Tuple

import numpy as np

from nudgerom.util.converters.provenance import HASH_HEX_LENGTH
from nudgerom.util.exception_handlers.errors import ConfigurationError

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
FLOAT_DTYPE = np.dtype("<f8")


def _check_provenance(provenance: str) -> str:
    if len(provenance) != HASH_HEX_LENGTH or any(c not in string.hexdigits for c in provenance):
        raise ValueError(f"Provenance must be a {HASH_HEX_LENGTH}-character hex digest, got '{provenance}'")
    return provenance.lower()


class BinaryWriter:
    def __init__(self, magic: bytes, version: int = FORMAT_VERSION):
        self._chunks = [magic, struct.pack("<H", version)]

    def u16(self, value: int) -> "BinaryWriter":
        self._chunks.append(struct.pack("<H", int(value)))
        return self

    def u64(self, value: int) -> "BinaryWriter":
        self._chunks.append(struct.pack("<Q", int(value)))
        return self

    def f64(self, value: float) -> "BinaryWriter":
        self._chunks.append(struct.pack("<d", float(value)))
        return self

    def array(self, values) -> "BinaryWriter":
        self._chunks.append(np.ascontiguousarray(values, dtype=FLOAT_DTYPE).tobytes(order="C"))
        return self

    def digest(self, value: str) -> "BinaryWriter":
        self._chunks.append(_check_provenance(value).encode("ascii"))
        return self

    def finish(self, provenance: str) -> bytes:
        return b"".join(self._chunks) + _check_provenance(provenance).encode("ascii")


class BinaryReader:
    """
    Sequential reader over an artifact file's bytes.

    Raises
    ------
    ConfigurationError
        On a wrong magic, an unsupported version, a truncated body or trailing bytes.
    """

    def __init__(self, data: bytes, magic: bytes, source: str = "<bytes>"):
        self._data = data
        self._source = source
        if not data.startswith(magic):
            kind = magic.rstrip(b"\x00").decode("ascii")
            raise ConfigurationError(f"'{source}' is not a {kind} file")
        if len(data) < len(magic) + 2 + HASH_HEX_LENGTH:
            raise ConfigurationError(f"'{source}' is truncated")

        self._offset = len(magic)
        self._end = len(data) - HASH_HEX_LENGTH
        (self.version,) = self._unpack("<H")
        if self.version > FORMAT_VERSION:
            raise ConfigurationError(f"'{source}' has unsupported format version {self.version}")

        try:
            self.provenance = _check_provenance(data[self._end :].decode("ascii"))
        except (UnicodeDecodeError, ValueError):
            raise ConfigurationError(f"'{source}' has a malformed provenance trailer")

    def _take(self, size: int) -> bytes:
        if self._offset + size > self._end:
            raise ConfigurationError(f"'{self._source}' is truncated")
        chunk = self._data[self._offset : self._offset + size]
        self._offset += size
        return chunk

    def _unpack(self, fmt: str) -> Tuple:
        return struct.unpack(fmt, self._take(struct.calcsize(fmt)))

    def u16(self) -> int:
        return self._unpack("<H")[0]

    def u64(self) -> int:
        return self._unpack("<Q")[0]

    def f64(self) -> float:
        return self._unpack("<d")[0]

    def array(self, shape: Tuple[int, ...]) -> np.ndarray:
        count = int(np.prod(shape, dtype=np.int64))
        buffer = self._take(count * FLOAT_DTYPE.itemsize)
        return np.frombuffer(buffer, dtype=FLOAT_DTYPE).astype(np.float64).reshape(shape)

    def digest(self) -> str:
        try:
            return _check_provenance(self._take(HASH_HEX_LENGTH).decode("ascii"))
        except (UnicodeDecodeError, ValueError):
            raise ConfigurationError(f"'{self._source}' holds a malformed provenance hash")

    def finish(self) -> None:
        if self._offset != self._end:
            raise ConfigurationError(f"'{self._source}' has {self._end - self._offset} unexpected trailing bytes")


def write_bytes(path: str, payload: bytes) -> None:
    with open(path, "wb") as f:
        f.write(payload)
    logger.debug(f"Wrote {len(payload)} bytes to {path}")


def read_bytes(path: str) -> bytes:
    with open(path, "rb") as f:
        return f.read()
