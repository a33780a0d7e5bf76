# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

from typing import Optional
from typing import Sequence


class NudgeRomError(Exception):
    """Base class for every error raised by nudgerom."""


class ConfigurationError(NudgeRomError, ValueError):
    """Invalid configuration: bad schema values, non-nested meshes, misaligned times."""


class DimensionError(NudgeRomError, ValueError):
    """Fields or arrays live on incompatible grids or have the wrong shape."""


class PreconditionError(NudgeRomError, ValueError):
    """An operation was called outside of its documented preconditions."""


class OutOfRangeError(NudgeRomError, ValueError):
    """An index or time lies outside the admissible range."""


class SchemaError(NudgeRomError, ValueError):
    """A diagnostics file does not conform to the expected column schema."""

    def __init__(self, message: str, column: Optional[str] = None):
        super().__init__(message)
        self.column = column


class PeriodDetectionError(NudgeRomError):
    """No oscillation period could be identified from an energy signal."""


class NumericalError(NudgeRomError, RuntimeError):
    """A numerical procedure failed (blow-up, stagnation, ill conditioning)."""


class BlowUpError(NumericalError):
    """Non-finite or unbounded state detected during time stepping."""

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step


class StagnationError(NumericalError):
    """A nonlinear iteration did not reach its tolerance."""

    def __init__(self, message: str, residual_history: Sequence[float]):
        super().__init__(message)
        self.residual_history = list(residual_history)


class ConditioningError(NumericalError):
    """A matrix expected to be positive semi-definite is not, beyond roundoff."""


class EmptyBasisError(NumericalError):
    """The snapshot data carries no energy, so no basis can be built."""


EXIT_SUCCESS = 0
EXIT_CONFIGURATION_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3
