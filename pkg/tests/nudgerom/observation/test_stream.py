# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pytest

from nudgerom.observation.coarse_mesh import CoarseMesh
from nudgerom.observation.coarse_mesh import interpolate
from nudgerom.observation.stream import ObservationRecorder
from nudgerom.observation.stream import build_observation_stream
from nudgerom.observation.stream import truth_reference_from_snapshots
from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import OutOfRangeError
from nudgerom.util.exception_handlers.errors import PreconditionError


@pytest.fixture
def mesh(small_grid):
    return CoarseMesh.with_cells(small_grid, 4)


def test_stream_aligns_with_snapshots(snapshots, mesh):
    da_times = [0.0, 0.2, 0.4]
    stream = build_observation_stream(snapshots, mesh, da_times, time_offset=0.1)

    assert stream.count == 3
    assert stream.time_offset == 0.1
    for n, snapshot_index in enumerate([1, 3, 5]):
        expected = interpolate(mesh, snapshots.field(snapshot_index)).values
        np.testing.assert_allclose(stream.sample(n).coarse.values, expected, rtol=0, atol=1e-14)
        assert stream.true_energy[n] == pytest.approx(snapshots.energies()[snapshot_index], rel=1e-12)
    assert stream.at(0.2).time == pytest.approx(0.2)


def test_stream_default_offset_is_first_snapshot(mesh, small_grid):
    from ..conftest import make_snapshots

    shifted = make_snapshots(small_grid, t0=5.0)
    stream = build_observation_stream(shifted, mesh, [0.0, 0.1])
    assert stream.time_offset == 5.0


def test_stream_rejects_times_outside_truth(snapshots, mesh):
    with pytest.raises(OutOfRangeError):
        build_observation_stream(snapshots, mesh, [0.0, 1.0])


def test_stream_never_interpolates_in_time(snapshots, mesh):
    with pytest.raises(ConfigurationError, match="does not coincide"):
        build_observation_stream(snapshots, mesh, [0.05])


def test_empty_stream(snapshots, mesh):
    stream = build_observation_stream(snapshots, mesh, [])
    assert stream.count == 0
    with pytest.raises(ConfigurationError):
        stream.index_of(0.0)


def test_require_steps(snapshots, mesh):
    stream = build_observation_stream(snapshots, mesh, snapshots.times - snapshots.times[0])
    np.testing.assert_array_equal(stream.require_steps(0.2, 3), [0, 2, 4, 6])
    with pytest.raises(ConfigurationError):
        stream.require_steps(0.15, 2)


def test_noise_is_seeded_and_off_by_default(snapshots, mesh):
    clean = build_observation_stream(snapshots, mesh, [0.0, 0.1])
    noisy = build_observation_stream(snapshots, mesh, [0.0, 0.1], noise_std=0.1, noise_seed=4)
    again = build_observation_stream(snapshots, mesh, [0.0, 0.1], noise_std=0.1, noise_seed=4)

    np.testing.assert_array_equal(noisy.coarse_values, again.coarse_values)
    assert not np.allclose(noisy.coarse_values, clean.coarse_values)
    np.testing.assert_array_equal(noisy.true_energy, clean.true_energy)
    assert noisy.provenance != clean.provenance


def test_recorder_matches_stored_stream(snapshots, basis, mesh):
    recorder = ObservationRecorder(mesh, time_offset=0.1, da_dt=0.2, n_steps=3, basis=basis)
    for step, (t, field) in enumerate(zip(snapshots.times, snapshots.fields)):
        recorder(step, float(t), field)

    stream = recorder.stream(snapshots.provenance)
    stored = build_observation_stream(snapshots, mesh, [0.0, 0.2, 0.4, 0.6], time_offset=0.1)
    np.testing.assert_allclose(stream.times, stored.times, atol=1e-15)
    np.testing.assert_allclose(stream.coarse_values, stored.coarse_values, rtol=0, atol=1e-14)
    np.testing.assert_allclose(stream.true_energy, stored.true_energy, rtol=1e-12)

    truth = recorder.truth_reference()
    expected = truth_reference_from_snapshots(snapshots, basis, [0.0, 0.2, 0.4, 0.6], time_offset=0.1)
    np.testing.assert_allclose(truth.coefficients, expected.coefficients, rtol=0, atol=1e-12)


def test_recorder_checks_count(snapshots, mesh):
    recorder = ObservationRecorder(mesh, time_offset=0.0, da_dt=0.2, n_steps=10)
    recorder(0, 0.0, snapshots.field(0))
    with pytest.raises(ConfigurationError, match="Recorded 1 observations, expected 11"):
        recorder.stream(snapshots.provenance)
    with pytest.raises(PreconditionError):
        recorder.truth_reference()
