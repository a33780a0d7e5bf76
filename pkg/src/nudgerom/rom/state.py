# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from typing import Dict
from typing import List
from typing import Optional

import numpy as np
import pandas as pd

from nudgerom.storage.diagnostics_file import DIAGNOSTIC_COLUMNS

logger = logging.getLogger(__name__)


class DiagnosticsAccumulator:
    """Per-step diagnostics rows of one DA-ROM run."""

    def __init__(self):
        self._rows: Dict[str, List[float]] = {column: [] for column in DIAGNOSTIC_COLUMNS}

    def record(
        self,
        step: int,
        time: float,
        mu: float,
        energy_rom: float,
        energy_true: float = np.nan,
        l2_error: float = np.nan,
        dat: float = np.nan,
    ) -> None:
        row = dict(
            step=step, time=time, mu=mu, energy_rom=energy_rom, energy_true=energy_true, l2_error=l2_error, dat=dat
        )
        for column in DIAGNOSTIC_COLUMNS:
            self._rows[column].append(row[column])

    def __len__(self) -> int:
        return len(self._rows["step"])

    @property
    def mu_history(self) -> np.ndarray:
        return np.asarray(self._rows["mu"], dtype=np.float64)

    @property
    def dat_history(self) -> np.ndarray:
        return np.asarray(self._rows["dat"], dtype=np.float64)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            {column: np.asarray(self._rows[column], dtype=np.float64) for column in DIAGNOSTIC_COLUMNS}
        )
        frame["step"] = frame["step"].astype(np.int64)
        return frame


@dataclass
class DaRunState:
    """
    State of one DA-ROM run.

    Steppers return a new state; `diagnostics` is shared between the states of a run, which owns it exclusively.

    Attributes
    ----------
    a : np.ndarray
        Modal coefficients at `step`.
    a_prev : np.ndarray or None
        Coefficients one step earlier; None before the first step.
    mu : float
        Current nudging parameter.
    step : int
    dt : float
    last_dat_sign : int
        Sign of DAT at the last controller check, 0 before any check.
    last_adjust_step : int or None
        Step at which the controller last changed mu.
    picard_iterations : int
        Picard iterations of the last step.
    """

    a: np.ndarray
    a_prev: Optional[np.ndarray]
    mu: float
    step: int
    dt: float
    last_dat_sign: int = 0
    last_adjust_step: Optional[int] = None
    picard_iterations: int = 0
    diagnostics: DiagnosticsAccumulator = field(default_factory=DiagnosticsAccumulator, repr=False)

    @classmethod
    def initial(cls, a0: np.ndarray, mu: float, dt: float) -> "DaRunState":
        return cls(a=np.array(a0, dtype=np.float64), a_prev=None, mu=float(mu), step=0, dt=float(dt))

    @property
    def time(self) -> float:
        return self.step * self.dt

    @property
    def energy(self) -> float:
        """1/2 ||u_r||^2; the basis is orthonormal."""
        return 0.5 * float(np.dot(self.a, self.a))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.a))

    def advanced(self, a_next: np.ndarray, picard_iterations: int) -> "DaRunState":
        return replace(self, a=a_next, a_prev=self.a, step=self.step + 1, picard_iterations=picard_iterations)

    def with_mu(self, mu: float, dat_sign: int, adjusted: bool) -> "DaRunState":
        return replace(
            self,
            mu=float(mu),
            last_dat_sign=dat_sign,
            last_adjust_step=self.step if adjusted else self.last_adjust_step,
        )
