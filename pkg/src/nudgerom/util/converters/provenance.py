# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import hashlib
import json
from enum import Enum
from typing import Any

from pydantic import BaseModel

HASH_HEX_LENGTH = 64


def _default(value: Any):
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, BaseModel):
        return value.dict()
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def canonical_json(document: Any) -> str:
    """
    Serializes a document with sorted keys and no whitespace, so equal documents give equal strings.

    Pydantic models are serialized through `.dict()`, enums by value and numpy values through `tolist()`.
    """
    if isinstance(document, BaseModel):
        document = document.dict()
    return json.dumps(document, sort_keys=True, separators=(",", ":"), default=_default)


def provenance_hash(document: Any) -> str:
    """sha256 hex digest of the canonical JSON form of `document`."""
    return hashlib.sha256(canonical_json(document).encode("utf-8")).hexdigest()


def derive_hash(*parents: str, **parameters: Any) -> str:
    """Hash of an artifact computed from upstream artifacts (by hash) and the parameters of the derivation."""
    return provenance_hash({"parents": list(parents), "parameters": parameters})
