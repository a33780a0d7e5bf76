# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
import typing
from functools import wraps

import click

from nudgerom.util.exception_handlers.errors import EXIT_CONFIGURATION_ERROR
from nudgerom.util.exception_handlers.errors import EXIT_NUMERICAL_FAILURE
from nudgerom.util.exception_handlers.errors import NudgeRomError
from nudgerom.util.exception_handlers.errors import NumericalError

logger = logging.getLogger(__name__)


def exit_code_for(error: BaseException) -> int:
    """
    Maps an exception raised by a nudgerom command onto the documented process exit code.

    Parameters
    ----------
    error : BaseException
        The exception that terminated the command.

    Returns
    -------
    int
        3 for numerical failures (blow-up, stagnation, ill conditioning), 2 for every other nudgerom or
        value error (configuration, dimensions, ranges, schemas).

    Raises
    ------
    BaseException
        `error` itself, when it is neither a nudgerom error nor a `ValueError`/`OSError`; unexpected
        exceptions keep their traceback.
    """
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL_FAILURE
    if isinstance(error, (NudgeRomError, ValueError, OSError)):
        return EXIT_CONFIGURATION_ERROR
    raise error


def cli_failure_context_manager(annotation_id: str, raise_on_failure: bool = False) -> typing.Callable:
    """
    A decorator that runs a CLI command inside a failure context and converts failures into exit codes.

    Parameters
    ----------
    annotation_id : str
        Name of the command, used in log messages.
    raise_on_failure : bool, optional
        If True, exceptions are re-raised unchanged instead of being mapped to an exit code. Useful when the
        command is driven programmatically. Defaults to False.

    Returns
    -------
    Callable
        A decorator that wraps the given command with failure handling logic.
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            with CliFailureContextManager(annotation_id=annotation_id, raise_on_failure=raise_on_failure) as ctx_mgr:
                result = func(*args, **kwargs)
            if ctx_mgr.exit_code:
                raise click.exceptions.Exit(ctx_mgr.exit_code)
            return result

        return wrapper

    return decorator


class CliFailureContextManager:
    """
    Context manager recording the outcome of a nudgerom command.

    Parameters
    ----------
    annotation_id : str
        The command name for log messages.
    raise_on_failure : bool, optional
        Determines whether to re-raise exceptions. Defaults to False, in which case the failure is logged and
        `exit_code` is set.
    """

    def __init__(self, annotation_id: str, raise_on_failure: bool = False):
        self.annotation_id = annotation_id
        self.raise_on_failure = raise_on_failure
        self.exit_code = 0

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        if exc_type is None:
            logger.debug(f"{self.annotation_id}: completed successfully.")
            return False

        if self.raise_on_failure or not issubclass(exc_type, Exception):
            return False

        if issubclass(exc_type, click.exceptions.ClickException) or issubclass(exc_type, click.exceptions.Exit):
            return False

        try:
            self.exit_code = exit_code_for(exc_value)
        except Exception:
            return False

        logger.error(f"{self.annotation_id} failed: {exc_value}")
        return True
