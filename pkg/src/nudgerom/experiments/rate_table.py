# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Convergence of the DA-ROM error with respect to the ROM truncation.

For each r the DA-ROM runs to t_end and the final-time L2 error against the truth is recorded. Consecutive rows
give the rate log(err_k / err_{k-1}) / log(tail_k / tail_{k-1}), with tail the eigenvalue tail
sqrt(sum_{j>r} lambda_j (1 + ||grad phi_j||^2)).
"""

import logging
from dataclasses import dataclass
from typing import Dict
from typing import Optional
from typing import Tuple

import numpy as np
import pandas as pd

from nudgerom.experiments.pipeline import Artifacts
from nudgerom.experiments.pipeline import prepare_artifacts
from nudgerom.experiments.report import Report
from nudgerom.fields.velocity import VelocityField
from nudgerom.observation.coarse_mesh import CoarseMesh
from nudgerom.observation.stream import ObservationStream
from nudgerom.observation.truth import TruthReference
from nudgerom.pod.basis import PodBasis
from nudgerom.pod.basis import eigentail
from nudgerom.rom.operators import assemble
from nudgerom.rom.runner import run
from nudgerom.schemas.da_config_schema import DaConfigSchema
from nudgerom.schemas.experiment_config_schema import ExperimentConfigSchema
from nudgerom.util.exception_handlers.errors import NudgeRomError
from nudgerom.util.exception_handlers.errors import OutOfRangeError
from nudgerom.util.exception_handlers.errors import PeriodDetectionError
from nudgerom.util.multi_processing.worker_pool import SweepWorkerPool
from nudgerom.util.signal.periodicity import detect_period
from nudgerom.util.tracing.latency import latency_logger

logger = logging.getLogger(__name__)

RATE_COLUMNS = ["r", "eigentail", "final_error", "time_averaged_error", "rate", "flagged", "failure"]
PERIOD_ALIGNMENT_TOL = 0.05


def compute_rates(errors, tails) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rates between consecutive rows.

    Returns
    -------
    tuple
        `rates` (NaN in the first row and wherever a rate is undefined) and `flagged`, True for rows whose
        rate is degenerate: equal consecutive errors (rate reported as 0), or a missing, zero or repeated tail.
    """
    errors = np.asarray(errors, dtype=np.float64)
    tails = np.asarray(tails, dtype=np.float64)
    rates = np.full(errors.shape, np.nan)
    flagged = np.zeros(errors.shape, dtype=bool)
    for k in range(1, errors.size):
        pair_errors, pair_tails = errors[k - 1 : k + 1], tails[k - 1 : k + 1]
        if not (np.all(np.isfinite(pair_errors)) and np.all(np.isfinite(pair_tails))):
            flagged[k] = True
        elif pair_errors[0] == pair_errors[1]:
            rates[k] = 0.0
            flagged[k] = True
        elif np.any(pair_errors <= 0.0) or np.any(pair_tails <= 0.0) or pair_tails[0] == pair_tails[1]:
            flagged[k] = True
        else:
            rates[k] = np.log(pair_errors[1] / pair_errors[0]) / np.log(pair_tails[1] / pair_tails[0])
    return rates, flagged


@dataclass(frozen=True, eq=False)
class RateTable:
    """Rows of (r, eigentail, final error, rate); rows whose run failed carry the failure message."""

    rows: pd.DataFrame
    header: Dict[str, object]

    @property
    def rates(self) -> np.ndarray:
        return self.rows["rate"].to_numpy()[1:]

    @property
    def mean_rate(self) -> float:
        finite = self.rates[np.isfinite(self.rates)]
        return float(finite.mean()) if finite.size else float("nan")

    @property
    def complete(self) -> bool:
        return bool((self.rows["failure"] == "").all())

    def to_report(self) -> Report:
        return Report(name="rate_table", table=self.rows, header=self.header)


def horizon_in_periods(config: ExperimentConfigSchema, artifacts: Artifacts) -> Optional[float]:
    """DA horizon measured in oscillation periods, or None when no period is known."""
    period = config.pod.period
    if period is None:
        try:
            period = detect_period(artifacts.snapshots.times, artifacts.snapshots.energies())
        except PeriodDetectionError as e:
            logger.warning(f"Cannot relate t_end to the oscillation period: {e}")
            return None
    periods = config.darom.t_end / period
    if abs(periods - round(periods)) > PERIOD_ALIGNMENT_TOL or round(periods) < 1:
        logger.warning(f"t_end={config.darom.t_end:g} spans {periods:.3f} periods; pick a whole number of periods")
    return periods


def rate_row_job(
    basis: PodBasis,
    r: int,
    mesh: CoarseMesh,
    forcing: VelocityField,
    nu: float,
    darom: DaConfigSchema,
    stream: ObservationStream,
    truth: TruthReference,
) -> Dict[str, object]:
    """One row of the table; numerical and configuration failures are caught and recorded."""
    row = {"r": r, "eigentail": np.nan, "final_error": np.nan, "time_averaged_error": np.nan, "failure": ""}
    try:
        row["eigentail"] = eigentail(basis, r)
        ops = assemble(basis, r, mesh, forcing, nu=nu)
        result = run(ops, darom.copy(update={"r": r}), stream, truth)
        row["final_error"] = result.final_error
        row["time_averaged_error"] = result.time_averaged_error
    except NudgeRomError as e:
        logger.error(f"Rate table row r={r} failed: {e}")
        row["failure"] = f"{type(e).__name__}: {e}"
    return row


@latency_logger(name="rate_table")
def rate_table(config: ExperimentConfigSchema, artifacts: Optional[Artifacts] = None) -> RateTable:
    """
    Runs the DA-ROM for every r of `experiment.r_list` at the configured mu, H and dt.

    Raises
    ------
    OutOfRangeError
        If the largest requested r exceeds the basis rank d.
    """
    artifacts = artifacts or prepare_artifacts(config)
    basis = artifacts.basis
    r_list = list(config.experiment.r_list)
    if r_list[-1] > basis.d:
        raise OutOfRangeError(f"r_list reaches r={r_list[-1]} but the basis has only d={basis.d} modes")

    darom = config.darom.copy(update={"adaptive": None})
    jobs = [
        (basis, r, artifacts.mesh, artifacts.forcing, artifacts.nu, darom, artifacts.stream, artifacts.truth)
        for r in r_list
    ]
    rows = SweepWorkerPool(config.experiment.workers).map(rate_row_job, jobs)

    frame = pd.DataFrame(rows)
    rates, flagged = compute_rates(frame["final_error"], frame["eigentail"])
    frame["rate"] = rates
    frame["flagged"] = flagged
    frame = frame[RATE_COLUMNS]
    for row in frame.itertuples():
        if row.flagged and row.Index > 0:
            logger.warning(f"Rate between r={r_list[row.Index - 1]} and r={row.r} is degenerate")

    header = dict(artifacts.provenance())
    header.update({"kind": "rate_table", "mu": repr(float(darom.mu0)), "dt": repr(float(darom.dt))})
    periods = horizon_in_periods(config, artifacts)
    header["t_end_periods"] = "unknown" if periods is None else f"{periods:.6g}"
    table = RateTable(rows=frame, header=header)
    logger.info(f"Rate table over r={r_list}: mean rate {table.mean_rate:.3f}")
    return table
