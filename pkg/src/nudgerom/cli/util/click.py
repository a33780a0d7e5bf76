# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import json
import logging
import os
from typing import List
from typing import Union

import click

from nudgerom.schemas.dns_config_schema import DnsConfigSchema
from nudgerom.schemas.experiment_config_schema import ExperimentConfigSchema
from nudgerom.schemas.experiment_config_schema import load_experiment_config
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.schema.schema_validator import validate_schema

logger = logging.getLogger(__name__)

ADAPTIVE = "adaptive"


def click_validate_file_exists(ctx, param, value):
    if value is None:
        return None

    if not os.path.isfile(value):
        raise click.BadParameter(f"File does not exist: {value}")

    return value


def click_load_config(ctx, param, value) -> ExperimentConfigSchema:
    """Reads and validates an experiment configuration; invalid documents are usage errors (exit code 2)."""
    if value is None:
        return None

    if not os.path.isfile(value):
        raise click.BadParameter(f"Configuration file does not exist: {value}")

    try:
        return load_experiment_config(value)
    except ConfigurationError as e:
        raise click.BadParameter(str(e))


def click_load_dns_config(ctx, param, value) -> DnsConfigSchema:
    """Accepts a full experiment configuration (its `dns` section is used) or a bare DNS configuration."""
    if value is None:
        return None

    if not os.path.isfile(value):
        raise click.BadParameter(f"Configuration file does not exist: {value}")

    try:
        with open(value, "r") as f:
            document = json.load(f)
        if isinstance(document, dict) and "dns" in document:
            return load_experiment_config(value).dns
        return validate_schema(document, DnsConfigSchema)
    except json.JSONDecodeError as e:
        raise click.BadParameter(f"Configuration file '{value}' is not valid JSON: {e}")
    except ConfigurationError as e:
        raise click.BadParameter(str(e))


def parse_mu(value: str) -> Union[float, str]:
    """A non-negative nudging parameter or the literal 'adaptive'."""
    text = str(value).strip().lower()
    if text == ADAPTIVE:
        return ADAPTIVE
    try:
        mu = float(text)
    except ValueError:
        raise ValueError(f"mu must be a non-negative number or '{ADAPTIVE}', got '{value}'")
    if not mu >= 0.0:
        raise ValueError(f"mu must be non-negative, got {value}")
    return mu


def click_parse_mu(ctx, param, value):
    if value is None:
        return None

    try:
        return parse_mu(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


def parse_float_list(value: str) -> List[float]:
    items = [item.strip() for item in str(value).split(",") if item.strip()]
    if not items:
        raise ValueError("expected a comma separated list of numbers")
    try:
        return [float(item) for item in items]
    except ValueError:
        raise ValueError(f"'{value}' is not a comma separated list of numbers")


def click_parse_mu_list(ctx, param, value):
    if value is None:
        return None

    try:
        values = parse_float_list(value)
    except ValueError as e:
        raise click.BadParameter(str(e))
    if any(not mu >= 0.0 for mu in values):
        raise click.BadParameter(f"mu values must be non-negative: {value}")
    return values


def click_parse_r_list(ctx, param, value):
    if value is None:
        return None

    try:
        values = parse_float_list(value)
    except ValueError as e:
        raise click.BadParameter(str(e))
    if any(r != int(r) or r < 1 for r in values):
        raise click.BadParameter(f"r values must be positive integers: {value}")
    ranks = [int(r) for r in values]
    if any(b <= a for a, b in zip(ranks, ranks[1:])):
        raise click.BadParameter(f"r values must be strictly increasing: {value}")
    return ranks


def ensure_directory_with_permissions(directory_path: str):
    """
    Ensures that an output directory exists and is writable, creating it when needed.

    Raises
    ------
    OSError
        If the directory cannot be created or is not writable.
    """
    if directory_path is None:
        return

    try:
        os.makedirs(directory_path, exist_ok=True)
        if not os.access(directory_path, os.R_OK | os.W_OK):
            raise OSError(f"Directory {directory_path} does not have read/write permissions")
    except OSError as err:
        raise OSError(f"Error checking or creating directory: {err}")
