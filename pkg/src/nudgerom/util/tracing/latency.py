# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
import time
from functools import wraps

logger = logging.getLogger(__name__)


def latency_logger(name=None):
    """
    A decorator to log the elapsed wall time of a stage at DEBUG level.

    Parameters
    ----------
    name : str, optional
        Custom name to use in the log message. Defaults to the function's name.
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            func_name = name if name else func.__name__
            start_ns = time.perf_counter_ns()
            try:
                return func(*args, **kwargs)
            finally:
                elapsed_ms = (time.perf_counter_ns() - start_ns) / 1e6
                logger.debug(f"{func_name} elapsed: {elapsed_ms:.2f} msec.")

        return wrapper

    return decorator
