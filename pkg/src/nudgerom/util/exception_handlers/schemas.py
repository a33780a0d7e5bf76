# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from functools import wraps

from pydantic import ValidationError

from nudgerom.util.exception_handlers.errors import ConfigurationError

logger = logging.getLogger(__name__)


def schema_exception_handler(func, **kwargs):
    """
    A decorator that turns pydantic `ValidationError`s into `ConfigurationError`s.

    Each validation failure is reported as `location: message`, where the location is the dotted path into the
    configuration document, so a typo in a nested section such as `darom.adaptive.mu_step` is easy to find.

    Parameters
    ----------
    func : callable
        The function to be decorated. This function is expected to perform schema validation.

    kwargs : dict
        Additional keyword arguments to be passed to the function.

    Returns
    -------
    callable
        The wrapped function that executes `func` with exception handling.

    Raises
    ------
    ConfigurationError
        If a `ValidationError` is caught. The error is logged before it is raised.

    Examples
    --------
    >>> @schema_exception_handler
    ... def validate_config(config_data):
    ...     return GridSchema(**config_data)
    ...
    >>> validate_config({"nx": 3})
    Traceback (most recent call last):
    ...
    ConfigurationError: Invalid configuration: nx: nx must be a positive even integer
    """

    @wraps(func)
    def inner_function(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ValidationError as e:
            error_messages = "; ".join(
                [f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}" for error in e.errors()]
            )
            log_error_message = f"Invalid configuration: {error_messages}"
            logger.error(log_error_message)
            raise ConfigurationError(log_error_message) from e

    return inner_function
