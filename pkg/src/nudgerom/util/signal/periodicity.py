# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging

import numpy as np
from scipy.signal import find_peaks

from nudgerom.util.exception_handlers.errors import PeriodDetectionError

logger = logging.getLogger(__name__)

DEFAULT_MIN_CORRELATION = 0.5


def _uniform_spacing(times: np.ndarray) -> float:
    steps = np.diff(times)
    if steps.size == 0 or np.any(steps <= 0.0):
        raise PeriodDetectionError("Sample times must be strictly increasing.")
    spacing = float(np.mean(steps))
    if np.max(np.abs(steps - spacing)) > 1e-6 * spacing:
        raise PeriodDetectionError("Period detection requires uniformly spaced samples.")
    return spacing


def detect_period(times, energy, min_correlation: float = DEFAULT_MIN_CORRELATION) -> float:
    """
    Estimates the oscillation period of a uniformly sampled energy signal.

    The period is the lag of the first autocorrelation peak whose normalized height reaches `min_correlation`,
    refined to sub-sample accuracy with a parabola through the peak and its neighbours.

    Parameters
    ----------
    times : array_like
        Uniformly spaced, strictly increasing sample times.
    energy : array_like
        Signal values at `times`.
    min_correlation : float, optional
        Minimum normalized autocorrelation for a peak to count as a period.

    Returns
    -------
    float
        The detected period in time units.

    Raises
    ------
    PeriodDetectionError
        If the signal is constant, too short, or has no sufficiently correlated peak. Pass the period explicitly in
        that case.
    """
    times = np.asarray(times, dtype=np.float64)
    energy = np.asarray(energy, dtype=np.float64)
    if times.shape != energy.shape or times.size < 4:
        raise PeriodDetectionError("At least four matching time/energy samples are needed to detect a period.")

    spacing = _uniform_spacing(times)
    signal = energy - np.mean(energy)
    power = float(np.dot(signal, signal))
    if power <= 1e-28 * max(1.0, float(np.dot(energy, energy))):
        raise PeriodDetectionError("Energy signal is constant; no period can be detected. Provide the period.")

    correlation = np.correlate(signal, signal, mode="full")[signal.size - 1 :] / power
    peaks, _ = find_peaks(correlation, height=min_correlation)
    if peaks.size == 0:
        raise PeriodDetectionError(
            "No oscillation period found in the energy signal; provide the period explicitly."
        )

    lag = int(peaks[0])
    offset = 0.0
    if 0 < lag < correlation.size - 1:
        left, centre, right = correlation[lag - 1], correlation[lag], correlation[lag + 1]
        curvature = left - 2.0 * centre + right
        if curvature < 0.0:
            offset = 0.5 * (left - right) / curvature

    period = (lag + offset) * spacing
    logger.debug(f"Detected period {period:.6g} (lag {lag}, correlation {correlation[lag]:.3f}).")
    return period


def energy_peaks(energy) -> np.ndarray:
    """Indices of the local maxima of an energy signal."""
    peaks, _ = find_peaks(np.asarray(energy, dtype=np.float64))
    return peaks


def is_statistically_periodic(energy, rel_tol: float = 0.01) -> bool:
    """
    Decides whether an energy signal has settled onto a periodic orbit.

    The signal is considered periodic when the latest local maximum matches the maximum one or two peaks earlier
    to within `rel_tol` (two lags so that orbits with two distinct peaks per period are recognised).

    Parameters
    ----------
    energy : array_like
        Energy samples in time order.
    rel_tol : float, optional
        Relative tolerance on successive peak heights. Defaults to 1%.

    Returns
    -------
    bool
        True when the periodicity criterion is met.
    """
    energy = np.asarray(energy, dtype=np.float64)
    peaks = energy_peaks(energy)
    if peaks.size < 3:
        return False

    heights = energy[peaks]
    latest = heights[-1]
    for lag in (1, 2):
        if peaks.size > lag:
            previous = heights[-1 - lag]
            if abs(latest - previous) <= rel_tol * max(abs(latest), abs(previous)):
                return True

    return False
