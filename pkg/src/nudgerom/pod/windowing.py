# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
from typing import Optional

import numpy as np

from nudgerom.dns.snapshots import SnapshotSet
from nudgerom.util.converters.provenance import derive_hash
from nudgerom.util.exception_handlers.errors import PreconditionError
from nudgerom.util.signal.periodicity import DEFAULT_MIN_CORRELATION
from nudgerom.util.signal.periodicity import detect_period

logger = logging.getLogger(__name__)

WINDOW_TOL = 1e-9


def windowed_snapshots(
    snapshots: SnapshotSet,
    fraction: float,
    period: Optional[float] = None,
    min_correlation: float = DEFAULT_MIN_CORRELATION,
) -> SnapshotSet:
    """
    Keeps the snapshots in the first `fraction` of one oscillation period.

    The window is half open, t - t0 < fraction * period, with t0 the first snapshot time, so `fraction=1` returns
    exactly one period without the repeated end point.

    Parameters
    ----------
    snapshots : SnapshotSet
    fraction : float
        In (0, 1].
    period : float, optional
        Oscillation period. Detected from the snapshot energies when omitted.
    min_correlation : float, optional
        Passed to `detect_period`.

    Returns
    -------
    SnapshotSet

    Raises
    ------
    PeriodDetectionError
        If no period is given and none can be detected; pass `period` explicitly then.
    PreconditionError
        If `fraction` is outside (0, 1], the snapshots do not cover the window, or fewer than 2 snapshots remain.
    """
    if not 0.0 < fraction <= 1.0:
        raise PreconditionError(f"Window fraction must lie in (0, 1], got {fraction}")
    if period is None:
        period = detect_period(snapshots.times, snapshots.energies(), min_correlation=min_correlation)
    elif not period > 0.0:
        raise PreconditionError(f"Period must be strictly positive, got {period}")

    times = snapshots.times
    spacing = float(np.median(np.diff(times)))
    length = fraction * period
    if times[-1] - times[0] + spacing < length * (1.0 - WINDOW_TOL):
        raise PreconditionError(
            f"Snapshots span {times[-1] - times[0] + spacing:.6g} time units, shorter than the window {length:.6g}"
        )

    indices = np.flatnonzero(times - times[0] < length - WINDOW_TOL * period)
    if indices.size < 2:
        raise PreconditionError(
            f"Window of {fraction} x period {period:.6g} holds {indices.size} snapshot(s); at least 2 are needed"
        )

    logger.info(f"Windowed snapshots: {indices.size} of {snapshots.count} ({fraction:.0%} of period {period:.6g})")
    provenance = derive_hash(snapshots.provenance, window_fraction=fraction, period=period)
    return snapshots.subset(indices, provenance)
