# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
import sys
from enum import Enum


class LogLevel(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


def configure_logging(logger, level_name):
    """
    Configures the root handler and the given logger for a nudgerom entry point.

    Parameters
    ----------
    logger : logging.Logger
        The logger whose level is set.
    level_name : str
        The name of the logging level (e.g., "DEBUG", "INFO"). Case-insensitive.

    Raises
    ------
    ValueError
        If `level_name` is not a known logging level.
    """

    numeric_level = getattr(logging, str(level_name).upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Invalid log level: {level_name}")

    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    logger.setLevel(numeric_level)
    logging.getLogger("nudgerom").setLevel(numeric_level)
    logger.debug(f"Logging configured to {level_name} level.")
