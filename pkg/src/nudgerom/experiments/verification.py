# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

"""
Desk-scale property checks behind `nudgerom verify`.

Each check returns a row (check, value, lower, upper, passed). They run on small grids and take well under a
minute together except the temporal order checks, which dominate.
"""

import logging
from typing import Dict
from typing import List

import numpy as np
import pandas as pd

from nudgerom.dns.initial_conditions import random_seeded_field
from nudgerom.dns.snapshots import SnapshotSet
from nudgerom.dns.verification import temporal_order_check
from nudgerom.experiments.report import Report
from nudgerom.fields.grid import Grid
from nudgerom.fields.operators import b_star
from nudgerom.fields.operators import norm_grad
from nudgerom.fields.operators import norm_l2
from nudgerom.fields.velocity import VelocityField
from nudgerom.observation.coarse_mesh import CoarseMesh
from nudgerom.observation.coarse_mesh import interpolate
from nudgerom.pod.basis import build_pod
from nudgerom.pod.basis import lift_coefficients
from nudgerom.pod.basis import projection_errors
from nudgerom.pod.basis import stiffness_norm
from nudgerom.schemas.dns_config_schema import DnsConfigSchema
from nudgerom.util.converters.provenance import provenance_hash
from nudgerom.util.tracing.latency import latency_logger

logger = logging.getLogger(__name__)

VERIFY_SEED = 20240101


def _row(check: str, value: float, lower: float, upper: float) -> Dict[str, object]:
    passed = bool(np.isfinite(value) and lower <= value <= upper)
    if not passed:
        logger.warning(f"Verification check '{check}' failed: {value:.6g} not in [{lower:.6g}, {upper:.6g}]")
    return {"check": check, "value": float(value), "lower": lower, "upper": upper, "passed": passed}


def skew_symmetry_check(grid: Grid, triples: int = 200, seed: int = VERIFY_SEED) -> Dict[str, object]:
    """max |b*(w, v, v)| / (||w|| ||grad v||^2) over random triples."""
    worst = 0.0
    for k in range(triples):
        w = random_seeded_field(grid, seed + 2 * k)
        v = random_seeded_field(grid, seed + 2 * k + 1)
        scale = norm_l2(w) * norm_grad(v) ** 2
        worst = max(worst, abs(b_star(w, v, v)) / scale)
    return _row("b_star(w,v,v) / (|w| |grad v|^2)", worst, 0.0, 1e-12)


def taylor_green_config(n: int, stepper: str) -> DnsConfigSchema:
    return DnsConfigSchema(
        grid={"nx": n, "ny": n},
        nu=0.05,
        dt=0.1,
        t_end=1.0,
        stepper=stepper,
        initial_condition={"type": "taylor_green", "params": {"amplitude": 1.0, "kx": 1, "ky": 1}},
    )


def temporal_order_rows(n: int = 32, refinements: int = 4) -> List[Dict[str, object]]:
    rows = []
    for stepper, expected in (("bdf2", 2.0), ("backward_euler", 1.0)):
        result = temporal_order_check(taylor_green_config(n, stepper), refinements)
        rows.append(_row(f"Taylor-Green energy error rate ({stepper})", result.rate, expected - 0.2, expected + 0.2))
    return rows


def random_snapshots(grid: Grid, count: int = 20, seed: int = VERIFY_SEED) -> SnapshotSet:
    values = np.stack([random_seeded_field(grid, seed + k, energy=0.5 + 0.05 * k).stacked() for k in range(count)])
    return SnapshotSet(
        times=np.arange(count, dtype=np.float64),
        values=values,
        grid=grid,
        provenance=provenance_hash({"verify_snapshots": seed, "count": count, "grid": grid.shape}),
    )


def pod_optimality_check(snapshots: SnapshotSet) -> Dict[str, object]:
    """Largest relative gap between the summed projection error and the eigenvalue tail sum over r = 1..d."""
    basis = build_pod(snapshots)
    worst = 0.0
    for r in range(1, basis.d + 1):
        errors = projection_errors(basis, snapshots, r)
        worst = max(worst, abs(errors.total - errors.tail_sum) / basis.total_energy)
    return _row("POD projection error vs eigenvalue tail (relative)", worst, 0.0, 1e-8)


def inverse_estimate_check(snapshots: SnapshotSet, members: int = 100, seed: int = VERIFY_SEED) -> Dict[str, object]:
    """max of ||grad phi|| - |||S_r|||^(1/2) ||phi|| over random members of the ROM space."""
    basis = build_pod(snapshots)
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(members):
        r = int(rng.integers(1, basis.d + 1))
        phi = lift_coefficients(basis, rng.standard_normal(r))
        worst = max(worst, norm_grad(phi) - np.sqrt(stiffness_norm(basis, r)) * norm_l2(phi))
    return _row("POD inverse estimate excess", worst, -np.inf, 1e-10)


def interpolation_rows(n: int = 256) -> List[Dict[str, object]]:
    """Contraction of I_H and the fitted H-rate of ||I_H w - w|| over H in {L/8, L/16, L/32}."""
    grid = Grid(nx=n, ny=n)
    w = VelocityField.from_function(grid, lambda x, y: (np.sin(x) * np.cos(2.0 * y), np.cos(x) + np.sin(y)))
    widths, errors, contraction = [], [], -np.inf
    for cells in (8, 16, 32):
        mesh = CoarseMesh.with_cells(grid, cells)
        coarse = interpolate(mesh, w)
        contraction = max(contraction, coarse.norm_l2 - norm_l2(w))
        widths.append(mesh.H)
        errors.append(norm_l2(coarse.lift() - w))
    rate = float(np.polyfit(np.log(widths), np.log(errors), 1)[0])
    return [
        _row("||I_H w|| - ||w||", contraction, -np.inf, 1e-12),
        _row("I_H approximation rate in H", rate, 0.9, 1.1),
    ]


@latency_logger(name="verify_report")
def verify_report(n: int = 16, include_temporal: bool = True) -> Report:
    """
    Runs the property suite.

    Parameters
    ----------
    n : int, optional
        Grid size of the skew-symmetry and POD checks.
    include_temporal : bool, optional
        Include the Taylor-Green temporal order checks.

    Returns
    -------
    Report
        One row per check; `passed` is False for violated bounds.
    """
    grid = Grid(nx=n, ny=n)
    snapshots = random_snapshots(grid)
    rows = [skew_symmetry_check(grid), pod_optimality_check(snapshots), inverse_estimate_check(snapshots)]
    rows.extend(interpolation_rows())
    if include_temporal:
        rows.extend(temporal_order_rows())
    table = pd.DataFrame(rows)
    passed = int(table["passed"].sum())
    logger.info(f"Verification: {passed} of {len(table)} checks passed")
    return Report(name="verify", table=table, header={"kind": "verify", "seed": VERIFY_SEED, "n": n})
