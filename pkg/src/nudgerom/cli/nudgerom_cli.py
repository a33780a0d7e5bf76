# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import json
import logging
import os
from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as distribution_version
from typing import List
from typing import Optional

import click
import numpy as np
import pandas as pd

from nudgerom.cli.util.click import ADAPTIVE
from nudgerom.cli.util.click import click_load_config
from nudgerom.cli.util.click import click_load_dns_config
from nudgerom.cli.util.click import click_parse_mu
from nudgerom.cli.util.click import click_parse_mu_list
from nudgerom.cli.util.click import click_parse_r_list
from nudgerom.cli.util.click import click_validate_file_exists
from nudgerom.cli.util.click import ensure_directory_with_permissions
from nudgerom.dns.forcing import build_forcing
from nudgerom.dns.solver import dns_run
from nudgerom.experiments.plots import PlotKindEnum
from nudgerom.experiments.plots import emit_plots
from nudgerom.experiments.rate_table import rate_table
from nudgerom.experiments.report import Report
from nudgerom.experiments.sweeps import adaptive_compare_report
from nudgerom.experiments.sweeps import inaccurate_basis_report
from nudgerom.experiments.sweeps import mu_sweep_report
from nudgerom.experiments.verification import verify_report
from nudgerom.observation.coarse_mesh import CoarseMesh
from nudgerom.observation.stream import build_observation_stream
from nudgerom.observation.stream import truth_reference_from_snapshots
from nudgerom.pod.basis import build_pod
from nudgerom.pod.windowing import windowed_snapshots
from nudgerom.rom.operators import assemble
from nudgerom.rom.runner import run
from nudgerom.schemas.da_config_schema import AdaptiveSchema
from nudgerom.schemas.da_config_schema import DaConfigSchema
from nudgerom.schemas.experiment_config_schema import ExperimentConfigSchema
from nudgerom.schemas.experiment_config_schema import ExperimentKindEnum
from nudgerom.storage.basis_file import read_basis_file
from nudgerom.storage.basis_file import write_basis_file
from nudgerom.storage.diagnostics_file import write_frame_csv
from nudgerom.storage.observation_file import read_observation_file
from nudgerom.storage.observation_file import write_observation_file
from nudgerom.storage.ops_file import read_operators_file
from nudgerom.storage.ops_file import write_operators_file
from nudgerom.storage.snapshot_file import read_snapshot_file
from nudgerom.storage.snapshot_file import write_snapshot_file
from nudgerom.util.exception_handlers.decorators import cli_failure_context_manager
from nudgerom.util.exception_handlers.errors import EXIT_NUMERICAL_FAILURE
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.logging.configuration import LogLevel
from nudgerom.util.logging.configuration import configure_logging
from nudgerom.util.schema.schema_validator import validate_schema

try:
    NUDGEROM_VERSION = distribution_version("nudgerom")
except PackageNotFoundError:
    NUDGEROM_VERSION = "Unknown -- No Distribution found."

logger = logging.getLogger(__name__)

STEPPER_CHOICES = ["be", "backward_euler", "bdf2"]


def _log_params(ctx: click.Context) -> None:
    logger.debug(f"nudgerom {ctx.info_name}:params:\n{json.dumps(ctx.params, indent=2, default=repr)}")


def _output_dir(out_dir: Optional[str], config: ExperimentConfigSchema) -> str:
    directory = out_dir or config.experiment.output_dir
    ensure_directory_with_permissions(directory)
    return directory


def _experiment_report(config: ExperimentConfigSchema, kind: ExperimentKindEnum) -> Report:
    if kind == ExperimentKindEnum.verify:
        return verify_report()
    if kind == ExperimentKindEnum.rate_table:
        return rate_table(config).to_report()
    reports = {
        ExperimentKindEnum.mu_sweep: mu_sweep_report,
        ExperimentKindEnum.inaccurate_basis: inaccurate_basis_report,
        ExperimentKindEnum.adaptive_compare: adaptive_compare_report,
    }
    return reports[kind](config)


def _emit_report_plots(report: Report, output_dir: str) -> Optional[str]:
    if report.name == ExperimentKindEnum.verify.value:
        return None
    if report.name == PlotKindEnum.rate_table.value:
        csv_paths = [os.path.join(output_dir, f"{report.name}.csv")]
    else:
        csv_paths = [os.path.join(output_dir, name) for name in report.run_paths.values()]
    return emit_plots(csv_paths, PlotKindEnum(report.name), output_dir).figure_path


def _write_report(report: Report, output_dir: str, plot: bool) -> None:
    paths = report.write(output_dir)
    if plot:
        figure = _emit_report_plots(report, output_dir)
        if figure is not None:
            paths.append(figure)
    click.echo(report.to_markdown())
    for path in paths:
        logger.info(f"Wrote {path}")


@click.group(invoke_without_command=True)
@click.option(
    "--log_level",
    type=click.Choice([level.value for level in LogLevel], case_sensitive=False),
    default="INFO",
    show_default=True,
    help="Log level.",
)
@click.option("--version", is_flag=True, help="Show version.")
@click.pass_context
def main(ctx, log_level: str, version: bool):
    """
    Continuous data assimilation reduced order models for 2D incompressible flow.

    \b
    Exit codes:
    - 0: success
    - 2: configuration error (invalid config, mismatched files, out of range parameters)
    - 3: numerical failure (blow-up, stagnation, ill conditioning, failed verification)
    """
    if version:
        click.echo(f"nudgerom : {NUDGEROM_VERSION}")
        ctx.exit(0)

    configure_logging(logger, log_level)
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@main.command()
@click.option(
    "--config",
    "dns_config",
    required=True,
    callback=click_load_dns_config,
    help="Experiment configuration (its 'dns' section is used) or a bare DNS configuration, as JSON.",
)
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Snapshot file to write.")
@click.option("--energy-out", type=click.Path(dir_okay=False), default=None, help="Optional CSV of energy vs time.")
@click.option("--progress", is_flag=True, help="Show a progress bar.")
@click.pass_context
@cli_failure_context_manager("dns")
def dns(ctx, dns_config, out: str, energy_out: Optional[str], progress: bool):
    """Runs the truth DNS and stores its snapshot window."""
    _log_params(ctx)
    result = dns_run(dns_config, progress=progress)
    write_snapshot_file(out, result.snapshots)
    logger.info(f"Wrote {result.snapshots.count} snapshots ({result.snapshots.provenance[:12]}) to {out}")
    if energy_out:
        frame = pd.DataFrame({"time": result.energy_times, "energy": result.energy_history})
        write_frame_csv(energy_out, frame, {"snapshots": result.snapshots.provenance, "kind": "energy"})


@main.command()
@click.option("--snapshots", required=True, callback=click_validate_file_exists, help="Snapshot file.")
@click.option("--H", "H", type=float, default=None, help="Coarse cell width; must tile the grid.")
@click.option("--cells", type=click.IntRange(min=1), default=None, help="Coarse cells per side (H = L / cells).")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Observation file to write.")
@click.option("--dt", type=float, default=None, help="DA-ROM step. Defaults to the snapshot spacing.")
@click.option("--t-end", "t_end", type=float, default=None, help="DA horizon. Defaults to the snapshot span.")
@click.option("--t-offset", "t_offset", type=float, default=None, help="Truth time of DA time 0.")
@click.option(
    "--basis",
    default=None,
    callback=click_validate_file_exists,
    help="POD basis file; when given, the truth reference against it is embedded for error diagnostics.",
)
@click.option("--noise-std", "noise_std", type=click.FloatRange(min=0.0), default=0.0, show_default=True)
@click.option("--noise-seed", "noise_seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.pass_context
@cli_failure_context_manager("observe")
def observe(
    ctx,
    snapshots: str,
    H: Optional[float],
    cells: Optional[int],
    out: str,
    dt: Optional[float],
    t_end: Optional[float],
    t_offset: Optional[float],
    basis: Optional[str],
    noise_std: float,
    noise_seed: int,
):
    """Observes stored snapshots on a coarse mesh at the DA-ROM step times."""
    _log_params(ctx)
    if (H is None) == (cells is None):
        raise ConfigurationError("Exactly one of --H or --cells must be given")

    snapshot_set = read_snapshot_file(snapshots)
    grid = snapshot_set.grid
    mesh = CoarseMesh(grid, H) if H is not None else CoarseMesh.with_cells(grid, cells)

    times = snapshot_set.times
    offset = float(times[0]) if t_offset is None else t_offset
    dt = float(np.median(np.diff(times))) if dt is None else dt
    t_end = float(times[-1]) - offset if t_end is None else t_end
    if not (dt > 0.0 and t_end >= 0.0):
        raise ConfigurationError(f"Need dt > 0 and t_end >= 0, got dt={dt}, t_end={t_end}")
    n_steps = int(round(t_end / dt))
    da_times = dt * np.arange(n_steps + 1)

    stream = build_observation_stream(snapshot_set, mesh, da_times, offset, noise_std, noise_seed)
    truth = None
    if basis is not None:
        truth = truth_reference_from_snapshots(snapshot_set, read_basis_file(basis), da_times, offset)
    write_observation_file(out, stream, truth)
    logger.info(f"Wrote {stream.count} observations to {out}")


@main.command()
@click.option("--snapshots", required=True, callback=click_validate_file_exists, help="Snapshot file.")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Basis file to write.")
@click.option(
    "--window-fraction",
    "window_fraction",
    type=click.FloatRange(min=0.0, max=1.0, min_open=True),
    default=None,
    help="Use only the first fraction of one oscillation period.",
)
@click.option("--period", type=float, default=None, help="Oscillation period; detected when omitted.")
@click.option("--max-modes", "max_modes", type=click.IntRange(min=1), default=None, help="Cap on the basis rank.")
@click.option("--rank-tol", "rank_tol", type=float, default=1e-12, show_default=True)
@click.pass_context
@cli_failure_context_manager("pod")
def pod(
    ctx,
    snapshots: str,
    out: str,
    window_fraction: Optional[float],
    period: Optional[float],
    max_modes: Optional[int],
    rank_tol: float,
):
    """Builds the POD basis of a snapshot file."""
    _log_params(ctx)
    snapshot_set = read_snapshot_file(snapshots)
    if window_fraction is not None and window_fraction < 1.0:
        snapshot_set = windowed_snapshots(snapshot_set, window_fraction, period=period)
    basis = build_pod(snapshot_set, rank_tol=rank_tol, max_modes=max_modes)
    write_basis_file(out, basis)
    logger.info(f"Wrote POD basis with d={basis.d} ({basis.provenance[:12]}) to {out}")


@main.command()
@click.option("--basis", default=None, callback=click_validate_file_exists, help="POD basis file.")
@click.option("--ops", default=None, callback=click_validate_file_exists, help="Pre-assembled operator file.")
@click.option("--obs", default=None, callback=click_validate_file_exists, help="Observation file.")
@click.option("--r", "r", type=click.IntRange(min=1), default=None, help="ROM dimension (required with --basis).")
@click.option("--mu", default="0", callback=click_parse_mu, show_default=True, help="Nudging parameter or 'adaptive'.")
@click.option("--mu0", type=click.FloatRange(min=0.0), default=0.0, show_default=True, help="Start of adaptive runs.")
@click.option(
    "--stepper", type=click.Choice(STEPPER_CHOICES, case_sensitive=False), default="bdf2", show_default=True
)
@click.option("--dt", type=float, required=True, help="DA-ROM time step.")
@click.option("--t-end", "t_end", type=float, required=True, help="Final DA time.")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Diagnostics CSV to write.")
@click.option(
    "--config",
    default=None,
    callback=click_load_config,
    help="Experiment configuration providing nu, forcing and the darom solver settings.",
)
@click.option("--nu", type=float, default=None, help="Viscosity (overrides the configuration).")
@click.option("--ops-out", "ops_out", type=click.Path(dir_okay=False), default=None, help="Write the operators.")
@click.option("--initial-condition", type=click.Choice(["zero", "projected"]), default="zero", show_default=True)
@click.option("--plot", is_flag=True, help="Also emit the plot script and figure next to the CSV.")
@click.option("--progress", is_flag=True, help="Show a progress bar.")
@click.pass_context
@cli_failure_context_manager("darom")
def darom(
    ctx,
    basis: Optional[str],
    ops: Optional[str],
    obs: Optional[str],
    r: Optional[int],
    mu,
    mu0: float,
    stepper: str,
    dt: float,
    t_end: float,
    out: str,
    config: Optional[ExperimentConfigSchema],
    nu: Optional[float],
    ops_out: Optional[str],
    initial_condition: str,
    plot: bool,
    progress: bool,
):
    """Runs one DA-ROM (or plain Galerkin ROM with --mu 0) and writes its diagnostics CSV."""
    _log_params(ctx)
    stream, truth = read_observation_file(obs) if obs is not None else (None, None)
    if ops is not None:
        operators = read_operators_file(ops)
        if r is not None and r != operators.r:
            raise ConfigurationError(f"--r {r} does not match the stored operators (r={operators.r})")
    else:
        if basis is None or r is None:
            raise ConfigurationError("Either --ops or both --basis and --r are required")
        if nu is None and config is None:
            raise ConfigurationError("The viscosity is needed: pass --nu or --config")
        pod_basis = read_basis_file(basis)
        # without observations a single cell stands in; its terms are never used at mu = 0
        mesh = stream.mesh if stream is not None else CoarseMesh(pod_basis.grid, pod_basis.grid.lx)
        forcing = build_forcing(config.dns.forcing, pod_basis.grid) if config is not None else None
        operators = assemble(pod_basis, r, mesh, forcing, nu=nu if nu is not None else config.dns.nu)
        if ops_out:
            write_operators_file(ops_out, operators)

    if truth is not None and truth.basis_provenance != operators.basis_provenance:
        logger.warning("The observation file's truth reference belongs to another basis; l2_error is left empty")
        truth = None

    document = config.darom.dict() if config is not None else {}
    document.update(
        {
            "r": operators.r,
            "mu0": mu0 if mu == ADAPTIVE else mu,
            "dt": dt,
            "t_end": t_end,
            "stepper": stepper,
            "initial_condition": initial_condition,
        }
    )
    if mu == ADAPTIVE:
        document["adaptive"] = document.get("adaptive") or AdaptiveSchema().dict()
    else:
        document["adaptive"] = None
    da_config = validate_schema(document, DaConfigSchema)

    result = run(operators, da_config, stream, truth, progress=progress)
    result.to_csv(out)
    logger.info(f"Wrote {len(result.diagnostics)} diagnostics rows to {out}")
    if plot:
        emit_plots([out], PlotKindEnum.darom, os.path.dirname(os.path.abspath(out)))


@main.command()
@click.option("--config", required=True, callback=click_load_config, help="Experiment configuration (JSON).")
@click.option("--mu-list", "mu_list", default=None, callback=click_parse_mu_list, help="e.g. 0,10,100,500")
@click.option("--out-dir", "out_dir", type=click.Path(file_okay=False), default=None, help="Report directory.")
@click.option("--plot/--no-plot", default=True, show_default=True)
@click.pass_context
@cli_failure_context_manager("sweep")
def sweep(ctx, config: ExperimentConfigSchema, mu_list: Optional[List[float]], out_dir: Optional[str], plot: bool):
    """Constant-mu DA-ROM runs sharing one basis and observation stream."""
    _log_params(ctx)
    if mu_list is not None:
        config = config.copy(update={"experiment": config.experiment.copy(update={"mu_list": mu_list})})
    _write_report(mu_sweep_report(config), _output_dir(out_dir, config), plot)


@main.command("rate-table")
@click.option("--config", required=True, callback=click_load_config, help="Experiment configuration (JSON).")
@click.option("--r-list", "r_list", default=None, callback=click_parse_r_list, help="e.g. 4,6,8,10,12")
@click.option("--out-dir", "out_dir", type=click.Path(file_okay=False), default=None, help="Report directory.")
@click.option("--plot/--no-plot", default=True, show_default=True)
@click.pass_context
@cli_failure_context_manager("rate-table")
def rate_table_command(
    ctx, config: ExperimentConfigSchema, r_list: Optional[List[int]], out_dir: Optional[str], plot: bool
):
    """Final-time DA-ROM error against the eigenvalue tail for increasing r."""
    _log_params(ctx)
    if r_list is not None:
        config = config.copy(update={"experiment": config.experiment.copy(update={"r_list": r_list})})
    table = rate_table(config)
    if not table.complete:
        logger.warning("Some rows of the rate table failed; see the 'failure' column")
    _write_report(table.to_report(), _output_dir(out_dir, config), plot)


@main.command()
@click.option("--config", required=True, callback=click_load_config, help="Experiment configuration (JSON).")
@click.option(
    "--kind",
    type=click.Choice([kind.value for kind in ExperimentKindEnum], case_sensitive=False),
    default=None,
    help="Experiment to run. Defaults to experiment.kind of the configuration.",
)
@click.option("--out-dir", "out_dir", type=click.Path(file_okay=False), default=None, help="Report directory.")
@click.option("--plot/--no-plot", default=True, show_default=True)
@click.pass_context
@cli_failure_context_manager("report")
def report(ctx, config: ExperimentConfigSchema, kind: Optional[str], out_dir: Optional[str], plot: bool):
    """Runs the configured experiment and writes its tables, run CSVs and figures."""
    _log_params(ctx)
    kind = ExperimentKindEnum(kind.lower()) if kind else config.experiment.kind
    _write_report(_experiment_report(config, kind), _output_dir(out_dir, config), plot)


@main.command()
@click.option("--n", type=click.IntRange(min=8), default=16, show_default=True, help="Grid size of the checks.")
@click.option("--skip-temporal", is_flag=True, help="Skip the Taylor-Green temporal order checks.")
@click.option("--out-dir", "out_dir", type=click.Path(file_okay=False), default=None, help="Write verify.md/csv.")
@click.pass_context
@cli_failure_context_manager("verify")
def verify(ctx, n: int, skip_temporal: bool, out_dir: Optional[str]):
    """Runs the property suite; exits with 3 when a check fails."""
    _log_params(ctx)
    result = verify_report(n=n, include_temporal=not skip_temporal)
    if out_dir:
        ensure_directory_with_permissions(out_dir)
        result.write(out_dir)
    click.echo(result.to_markdown())
    failed = result.table.loc[~result.table["passed"], "check"].tolist()
    if failed:
        logger.error(f"{len(failed)} verification check(s) failed: {'; '.join(failed)}")
        raise click.exceptions.Exit(EXIT_NUMERICAL_FAILURE)


if __name__ == "__main__":
    main()
