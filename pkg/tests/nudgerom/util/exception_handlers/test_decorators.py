# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

from unittest.mock import patch

import click
import pytest

from nudgerom.util.exception_handlers.decorators import cli_failure_context_manager
from nudgerom.util.exception_handlers.decorators import exit_code_for
from nudgerom.util.exception_handlers.errors import BlowUpError
from nudgerom.util.exception_handlers.errors import ConditioningError
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import DimensionError
from nudgerom.util.exception_handlers.errors import OutOfRangeError
from nudgerom.util.exception_handlers.errors import PeriodDetectionError
from nudgerom.util.exception_handlers.errors import SchemaError
from nudgerom.util.exception_handlers.errors import StagnationError

MODULE_UNDER_TEST = "nudgerom.util.exception_handlers.decorators"


@pytest.mark.parametrize(
    "error, expected",
    [
        (ConfigurationError("bad H"), 2),
        (DimensionError("grids differ"), 2),
        (OutOfRangeError("r > d"), 2),
        (SchemaError("missing", "mu"), 2),
        (PeriodDetectionError("flat"), 2),
        (ValueError("plain"), 2),
        (BlowUpError("nan", step=3), 3),
        (StagnationError("picard", [1.0, 0.5]), 3),
        (ConditioningError("not psd"), 3),
    ],
)
def test_exit_code_for(error, expected):
    assert exit_code_for(error) == expected


def test_exit_code_for_reraises_unexpected_errors():
    with pytest.raises(KeyError):
        exit_code_for(KeyError("boom"))


def test_blow_up_error_records_step():
    error = BlowUpError("Coefficients are not finite", step=17)
    assert error.step == 17
    assert "(step 17)" in str(error)


@patch(f"{MODULE_UNDER_TEST}.logger")
def test_cli_failure_context_manager_maps_numerical_failure(mock_logger):
    @cli_failure_context_manager("darom")
    def command():
        raise BlowUpError("Coefficients are not finite", step=5)

    with pytest.raises(click.exceptions.Exit) as exc_info:
        command()

    assert exc_info.value.exit_code == 3
    mock_logger.error.assert_called_once()
    assert "darom failed" in mock_logger.error.call_args[0][0]


def test_cli_failure_context_manager_maps_configuration_error():
    @cli_failure_context_manager("observe")
    def command():
        raise ConfigurationError("H does not tile the grid")

    with pytest.raises(click.exceptions.Exit) as exc_info:
        command()
    assert exc_info.value.exit_code == 2


def test_cli_failure_context_manager_success_returns_value():
    @cli_failure_context_manager("pod")
    def command(value):
        return value * 2

    assert command(21) == 42


def test_cli_failure_context_manager_raise_on_failure():
    @cli_failure_context_manager("pod", raise_on_failure=True)
    def command():
        raise ConfigurationError("bad")

    with pytest.raises(ConfigurationError):
        command()


def test_cli_failure_context_manager_lets_unexpected_errors_through():
    @cli_failure_context_manager("pod")
    def command():
        raise KeyError("programming error")

    with pytest.raises(KeyError):
        command()
