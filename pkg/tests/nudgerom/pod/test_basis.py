# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pytest

from nudgerom.dns.snapshots import SnapshotSet
from nudgerom.fields.operators import inner_l2
from nudgerom.fields.operators import norm_grad
from nudgerom.fields.operators import norm_l2
from nudgerom.pod.basis import build_pod
from nudgerom.pod.basis import eigentail
from nudgerom.pod.basis import lift_coefficients
from nudgerom.pod.basis import project
from nudgerom.pod.basis import projection_errors
from nudgerom.pod.basis import stiffness_norm
from nudgerom.util.exception_handlers.errors import EmptyBasisError
from nudgerom.util.exception_handlers.errors import OutOfRangeError


def test_modes_are_orthonormal(basis):
    modes = basis.modes
    gram = np.array([[inner_l2(a, b) for b in modes] for a in modes])
    np.testing.assert_allclose(gram, np.eye(basis.d), atol=1e-10)


def test_eigenvalues_are_ordered_and_sum_to_energy(snapshots, basis):
    assert basis.d == snapshots.count
    assert np.all(np.diff(basis.eigenvalues) <= 0.0)
    assert basis.eigenvalues.sum() == pytest.approx(basis.total_energy, rel=1e-12)
    assert basis.total_energy == pytest.approx(2.0 * snapshots.energies().sum(), rel=1e-12)


@pytest.mark.parametrize("r", [0, 1, 3, 8])
def test_projection_error_equals_eigenvalue_tail(snapshots, basis, r):
    errors = projection_errors(basis, snapshots, r)
    assert errors.total == pytest.approx(errors.tail_sum, rel=1e-8, abs=1e-10 * basis.total_energy)


def test_projection_residual_is_orthogonal(snapshots, basis):
    v = snapshots.field(2)
    projected = project(basis, 3, v)
    residual = v - projected.field
    for j in range(3):
        assert inner_l2(residual, basis.mode(j)) == pytest.approx(0.0, abs=1e-12)


def test_stiffness_matches_mode_gradients(basis):
    for j in range(basis.d):
        assert basis.grad_norms[j] == pytest.approx(norm_grad(basis.mode(j)) ** 2, rel=1e-10)
    np.testing.assert_allclose(basis.stiffness, basis.stiffness.T)


def test_inverse_estimate_holds(basis):
    rng = np.random.default_rng(0)
    for r in (1, 4, basis.d):
        phi = lift_coefficients(basis, rng.standard_normal(r))
        assert norm_grad(phi) <= np.sqrt(stiffness_norm(basis, r)) * norm_l2(phi) * (1.0 + 1e-10)


def test_eigentail(basis):
    assert eigentail(basis, basis.d) == 0.0
    expected = np.sqrt(np.sum(basis.eigenvalues[2:] * (1.0 + basis.grad_norms[2:])))
    assert eigentail(basis, 2) == pytest.approx(expected)
    assert eigentail(basis, 1) > eigentail(basis, 2)


def test_rank_tolerance_and_cap(small_grid):
    from ..conftest import make_snapshots

    base = make_snapshots(small_grid, count=3)
    values = np.concatenate([base.values, base.values[:1] + base.values[1:2]])
    dependent = SnapshotSet(np.arange(4.0), values, small_grid, base.provenance)
    assert build_pod(dependent).d == 3
    assert build_pod(dependent, max_modes=2).d == 2


def test_rank_must_be_in_range(basis):
    with pytest.raises(OutOfRangeError):
        project(basis, basis.d + 1, basis.mode(0))
    with pytest.raises(OutOfRangeError):
        project(basis, 0, basis.mode(0))


def test_zero_snapshots_have_no_basis(small_grid):
    zero = SnapshotSet(np.arange(3.0), np.zeros((3, 2) + small_grid.shape), small_grid, "0" * 64)
    with pytest.raises(EmptyBasisError):
        build_pod(zero)


def test_basis_is_deterministic(snapshots):
    first, second = build_pod(snapshots), build_pod(snapshots)
    np.testing.assert_array_equal(first.mode_array, second.mode_array)
    assert first.provenance == second.provenance
    assert build_pod(snapshots, max_modes=3).provenance != first.provenance


def test_rank_one_snapshots_give_one_mode(small_grid):
    from ..conftest import make_snapshots

    base = make_snapshots(small_grid, count=2).values[0]
    values = np.stack([scale * base for scale in (1.0, -2.0, 0.5, 3.0)])
    basis = build_pod(SnapshotSet(np.arange(4.0), values, small_grid, "1" * 64))
    assert basis.d == 1
    assert basis.eigenvalues[0] == pytest.approx(basis.total_energy, rel=1e-12)


def test_orthogonal_snapshots_give_squared_norms(small_grid):
    x, y = small_grid.coordinates
    first = np.stack([np.sin(y), np.zeros_like(x)])
    second = np.stack([np.zeros_like(x), np.cos(2 * x)])
    first *= 2.0 / np.sqrt(small_grid.weight * np.sum(first**2))
    second *= 1.0 / np.sqrt(small_grid.weight * np.sum(second**2))
    basis = build_pod(SnapshotSet(np.arange(2.0), np.stack([second, first]), small_grid, "2" * 64))
    np.testing.assert_allclose(basis.eigenvalues, [4.0, 1.0], rtol=1e-12)
    np.testing.assert_allclose(basis.mode_array[0], first / 2.0, atol=1e-12)
    np.testing.assert_allclose(basis.mode_array[1], second, atol=1e-12)


def test_modes_match_weighted_svd(snapshots, basis):
    weight = snapshots.grid.weight
    data = snapshots.values.reshape(snapshots.count, -1)
    left, singular, _ = np.linalg.svd(np.sqrt(weight) * data.T, full_matrices=False)
    np.testing.assert_allclose(basis.eigenvalues, singular**2, rtol=1e-8)

    modes = basis.mode_array.reshape(basis.d, -1)
    for j in range(basis.d):
        expected = left[:, j] / np.sqrt(weight)
        sign = np.sign(weight * modes[j] @ expected)
        np.testing.assert_allclose(modes[j], sign * expected, atol=1e-8 * np.max(np.abs(expected)))


def test_stiffness_norm_matches_power_iteration(basis):
    assert stiffness_norm(basis, 1) == pytest.approx(norm_grad(basis.mode(0)) ** 2, rel=1e-10)

    stiffness = basis.stiffness
    vector = np.ones(basis.d)
    estimate = 0.0
    for _ in range(5000):
        vector = stiffness @ vector
        vector /= np.linalg.norm(vector)
        estimate = vector @ stiffness @ vector
    assert stiffness_norm(basis, basis.d) == pytest.approx(estimate, rel=1e-10)
    assert stiffness_norm(basis, basis.d) == pytest.approx(np.linalg.norm(stiffness, 2), rel=1e-10)
