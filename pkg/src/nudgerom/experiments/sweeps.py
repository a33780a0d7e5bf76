# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from typing import Dict
from typing import List
from typing import Optional

import numpy as np
import pandas as pd

from nudgerom.experiments.pipeline import Artifacts
from nudgerom.experiments.pipeline import prepare_artifacts
from nudgerom.experiments.report import Report
from nudgerom.experiments.report import format_float_list
from nudgerom.observation.stream import ObservationStream
from nudgerom.observation.truth import TruthReference
from nudgerom.rom.operators import RomOperators
from nudgerom.rom.runner import RunResult
from nudgerom.rom.runner import run
from nudgerom.schemas.da_config_schema import AdaptiveSchema
from nudgerom.schemas.da_config_schema import DaConfigSchema
from nudgerom.schemas.experiment_config_schema import ExperimentConfigSchema
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.multi_processing.worker_pool import SweepWorkerPool
from nudgerom.util.tracing.latency import latency_logger

logger = logging.getLogger(__name__)


def darom_job(
    ops: RomOperators, darom: DaConfigSchema, stream: ObservationStream, truth: Optional[TruthReference]
) -> RunResult:
    return run(ops, darom, stream, truth)


def run_label(mu: float, adaptive: bool = False) -> str:
    return f"mu_{mu:g}" + ("_adaptive" if adaptive else "")


def require_rank(config: ExperimentConfigSchema) -> int:
    if config.darom.r is None:
        raise ConfigurationError("darom.r must be set for this experiment")
    return config.darom.r


def constant_mu_configs(darom: DaConfigSchema, mu_list) -> List[DaConfigSchema]:
    return [darom.copy(update={"mu0": float(mu), "adaptive": None}) for mu in mu_list]


def summary_row(result: RunResult) -> Dict[str, float]:
    return {
        "final_error": result.final_error,
        "time_averaged_error": result.time_averaged_error,
        "time_averaged_energy_error": result.time_averaged_energy_error,
        "time_averaged_relative_energy_error": result.time_averaged_relative_energy_error,
        "max_norm": result.max_norm,
    }


@latency_logger(name="mu_sweep_report")
def mu_sweep_report(config: ExperimentConfigSchema, artifacts: Optional[Artifacts] = None) -> Report:
    """
    Constant-mu DA-ROM runs for every mu of `experiment.mu_list` on one basis and observation stream.

    The summary holds the final and time-averaged L2 errors and energy errors per mu.
    """
    r = require_rank(config)
    artifacts = artifacts or prepare_artifacts(config)
    ops = artifacts.operators(r)
    mu_list = list(config.experiment.mu_list)

    jobs = [(ops, darom, artifacts.stream, artifacts.truth) for darom in constant_mu_configs(config.darom, mu_list)]
    results = SweepWorkerPool(config.experiment.workers).map(darom_job, jobs)

    table = pd.DataFrame([{"mu": float(mu), **summary_row(result)} for mu, result in zip(mu_list, results)])
    header = dict(artifacts.provenance())
    header.update({"kind": "mu_sweep", "r": r, "mu_list": format_float_list(mu_list)})
    best = table.loc[table["time_averaged_error"].idxmin()]
    logger.info(f"mu sweep: lowest time-averaged error {best['time_averaged_error']:.4e} at mu={best['mu']:g}")
    return Report(
        name="mu_sweep",
        table=table,
        header=header,
        runs={run_label(mu): result for mu, result in zip(mu_list, results)},
    )


@latency_logger(name="inaccurate_basis_report")
def inaccurate_basis_report(config: ExperimentConfigSchema, artifacts: Optional[Artifacts] = None) -> Report:
    """
    DA-ROM accuracy with bases built from partial oscillation periods.

    For every window fraction of `experiment.window_fractions`, runs mu = 0 and every mu of `experiment.mu_list`.
    `ratio_to_mu0` divides each run's time-averaged energy error by that of the mu = 0 run on the same basis.
    """
    r = require_rank(config)
    fractions = list(config.experiment.window_fractions)
    if artifacts is None or any(fraction not in artifacts.bases for fraction in fractions):
        artifacts = prepare_artifacts(config, window_fractions=fractions)
    mu_list = sorted(set([0.0] + [float(mu) for mu in config.experiment.mu_list]))

    jobs, keys = [], []
    for fraction in fractions:
        ops = artifacts.operators(r, fraction)
        for darom in constant_mu_configs(config.darom, mu_list):
            jobs.append((ops, darom, artifacts.stream, artifacts.truths[fraction]))
            keys.append((fraction, darom.mu0))
    results = SweepWorkerPool(config.experiment.workers).map(darom_job, jobs)

    rows = []
    for (fraction, mu), result in zip(keys, results):
        rows.append({"window_fraction": fraction, "mu": mu, **summary_row(result)})
    table = pd.DataFrame(rows)
    baseline = table[table["mu"] == 0.0].set_index("window_fraction")["time_averaged_energy_error"]
    table["ratio_to_mu0"] = table["time_averaged_energy_error"] / table["window_fraction"].map(baseline)

    header = dict(artifacts.provenance())
    for fraction in fractions:
        header[f"basis_{fraction:g}"] = artifacts.bases[fraction].provenance
    header.update(
        {
            "kind": "inaccurate_basis",
            "r": r,
            "mu_list": format_float_list(mu_list),
            "window_fractions": format_float_list(fractions),
        }
    )
    runs = {f"w{fraction:g}_{run_label(mu)}": result for (fraction, mu), result in zip(keys, results)}
    return Report(name="inaccurate_basis", table=table, header=header, runs=runs)


@latency_logger(name="adaptive_compare_report")
def adaptive_compare_report(config: ExperimentConfigSchema, artifacts: Optional[Artifacts] = None) -> Report:
    """
    Compares the adaptive-mu controller against the constant-mu runs of `experiment.mu_list`.

    The adaptive run starts at `darom.mu0` with the `darom.adaptive` settings (defaults when unset).
    """
    r = require_rank(config)
    artifacts = artifacts or prepare_artifacts(config)
    ops = artifacts.operators(r)
    mu_list = list(config.experiment.mu_list)

    configs = constant_mu_configs(config.darom, mu_list)
    configs.append(config.darom.copy(update={"adaptive": config.darom.adaptive or AdaptiveSchema()}))
    jobs = [(ops, darom, artifacts.stream, artifacts.truth) for darom in configs]
    results = SweepWorkerPool(config.experiment.workers).map(darom_job, jobs)

    rows, runs = [], {}
    for darom, result in zip(configs, results):
        mu_history = result.mu_history
        rows.append(
            {
                "mu0": darom.mu0,
                "adaptive": darom.is_adaptive,
                "final_mu": float(mu_history[-1]),
                "mu_changes": int(np.count_nonzero(np.diff(mu_history))),
                **summary_row(result),
            }
        )
        runs[run_label(darom.mu0, darom.is_adaptive)] = result
    table = pd.DataFrame(rows)

    header = dict(artifacts.provenance())
    header.update({"kind": "adaptive_compare", "r": r, "mu_list": format_float_list(mu_list)})
    adaptive_row = table.iloc[-1]
    logger.info(
        f"Adaptive run: relative energy error {adaptive_row['time_averaged_relative_energy_error']:.4e}, "
        f"{adaptive_row['mu_changes']} mu changes, final mu {adaptive_row['final_mu']:g}"
    )
    return Report(name="adaptive_compare", table=table, header=header, runs=runs)
