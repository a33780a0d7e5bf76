# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
import math
import multiprocessing as mp
import os
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures import as_completed
from typing import Any
from typing import Callable
from typing import List
from typing import Optional
from typing import Sequence

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = "NUDGEROM_THREADS"


def _available_cpus() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def resolve_worker_count(requested: Optional[int] = None) -> int:
    """
    Determines how many workers a parallel section may use.

    The default is 40% of the CPUs available to this process (at least one). `NUDGEROM_THREADS`, when set, caps the
    result, and so does an explicit `requested` count.

    Parameters
    ----------
    requested : int, optional
        Number of workers asked for by the caller.

    Returns
    -------
    int
        The number of workers to use, always >= 1.

    Raises
    ------
    ValueError
        If `NUDGEROM_THREADS` is set to something other than a positive integer.
    """
    workers = math.floor(max(1, _available_cpus() * 0.4))
    if requested is not None:
        workers = max(1, int(requested))

    env_value = os.getenv(THREADS_ENV_VAR)
    if env_value:
        try:
            cap = int(env_value)
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be a positive integer, got '{env_value}'")
        if cap < 1:
            raise ValueError(f"{THREADS_ENV_VAR} must be a positive integer, got '{env_value}'")
        workers = min(workers, cap)

    return workers


def fft_workers() -> int:
    """Thread count handed to `scipy.fft`; 1 unless `NUDGEROM_THREADS` allows more."""
    env_value = os.getenv(THREADS_ENV_VAR)
    if not env_value:
        return 1
    return resolve_worker_count(requested=_available_cpus())


class SweepWorkerPool:
    """
    A process pool for independent whole-run jobs (parameter sweeps).

    Each job owns its state; jobs share nothing but their (picklable) inputs. Results are always returned in
    submission order, so a sweep's output does not depend on scheduling.

    Parameters
    ----------
    max_workers : int, optional
        Upper bound on worker processes; further capped by `NUDGEROM_THREADS`.

    Examples
    --------
    >>> pool = SweepWorkerPool(max_workers=2)
    >>> pool.map(pow, [(2, 3), (3, 2)])
    [8, 9]
    """

    def __init__(self, max_workers: Optional[int] = None):
        self._max_workers = resolve_worker_count(max_workers)

    @property
    def max_workers(self) -> int:
        return self._max_workers

    def map(self, process_fn: Callable, jobs: Sequence[Sequence[Any]]) -> List[Any]:
        """
        Runs `process_fn(*job)` for every job.

        Parameters
        ----------
        process_fn : callable
            A module-level (picklable) function.
        jobs : sequence of argument tuples
            Positional arguments for each call.

        Returns
        -------
        list
            Results in the order of `jobs`.

        Raises
        ------
        Exception
            The first exception raised by a job, after all jobs have finished.
        """
        jobs = [tuple(job) for job in jobs]
        if not jobs:
            return []

        workers = min(self._max_workers, len(jobs))
        if workers == 1:
            logger.debug(f"Running {len(jobs)} jobs inline.")
            return [process_fn(*job) for job in jobs]

        logger.debug(f"Running {len(jobs)} jobs on {workers} worker processes.")
        results: List[Any] = [None] * len(jobs)
        errors = {}
        context = mp.get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=context) as executor:
            futures = {executor.submit(process_fn, *job): index for index, job in enumerate(jobs)}
            for future in as_completed(futures):
                index = futures[future]
                try:
                    results[index] = future.result()
                except Exception as e:
                    logger.error(f"Sweep job {index} failed - {e}")
                    errors[index] = e

        if errors:
            raise errors[min(errors)]
        return results
