import math

import numpy as np
import pytest

from catcoh.errors import CapacityError, StateValidationError
from catcoh.quantum.engine import (
    ShiftConvention,
    TwoLevelUnitary,
    apply_group_phase,
    attach_and_interact,
    init_joint,
    number_conserved,
    project_targets,
    run_protocol,
)
from catcoh.quantum.ladder import apply_half_shift_binomial, make_reservoir


def test_unitary_validation():
    with pytest.raises(StateValidationError):
        TwoLevelUnitary(1 / math.sqrt(2), 1 / math.sqrt(2), 1 / math.sqrt(2), 1 / math.sqrt(2))
    TwoLevelUnitary.from_matrix([[0, 1j], [1j, 0]])


def test_init_joint_embeds_reservoir():
    joint = init_joint(make_reservoir(2, 0, 0.0), 0)
    assert (joint.base, joint.dim, joint.k) == (0, 2, 0)
    np.testing.assert_allclose(joint.amps, [1 / math.sqrt(2)] * 2)

    padded = init_joint(make_reservoir(2, 0, 0.0), 3)
    assert (padded.base, padded.dim) == (-3, 5)
    np.testing.assert_allclose(padded.amps, [0, 0, 0, 1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert padded.norm() == pytest.approx(1)


def test_identity_leaves_reservoir_alone():
    joint = init_joint(make_reservoir(3, 0, 0.5), 1)
    after = attach_and_interact(joint, TwoLevelUnitary.identity())
    assert after.k == 1
    np.testing.assert_array_equal(after.amps[0], joint.amps)
    assert not np.any(after.amps[1])


def test_hadamard_single_step(hadamard):
    joint = attach_and_interact(init_joint(make_reservoir(2, 0, 0.0), 1), hadamard)
    # window [-1, 0, 1]
    np.testing.assert_allclose(joint.amps[0], [0, 0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(joint.amps[1], [0.5, 0.5, 0], atol=1e-15)


def test_norm_preserved_over_many_uses(hadamard):
    assert run_protocol(5, 0, 0.3, hadamard, 6).norm() == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("L", [1, 4, 256])
@pytest.mark.parametrize("k", [0, 3, 10])
def test_unitarity(L, k):
    assert abs(run_protocol(L, 2, 1.0, None, k).norm() - 1) < 1e-12


def test_capacity_exhausted(hadamard):
    joint = attach_and_interact(init_joint(make_reservoir(2, 0, 0.0), 1), hadamard)
    with pytest.raises(CapacityError):
        attach_and_interact(joint, hadamard)


def test_unnormalized_reservoir_rejected():
    state = apply_half_shift_binomial(make_reservoir(2, 0, 0.0), 1)
    with pytest.raises(StateValidationError):
        init_joint(state, 1)


def test_run_protocol_zero_uses_is_bare_reservoir():
    joint = run_protocol(4, 1, 0.2, None, 0)
    np.testing.assert_allclose(joint.amps, make_reservoir(4, 1, 0.2).amps)


@pytest.mark.parametrize("k", [0, 1, 4])
def test_number_histogram_stays_uniform(k):
    populations = run_protocol(2, 0, 0.0, None, k).number_populations()
    assert populations[0] == pytest.approx(0.5)
    assert populations[1] == pytest.approx(0.5)
    assert sum(populations.values()) == pytest.approx(1)


@pytest.mark.parametrize("l0", [-4, 0, 9])
def test_exact_number_conservation(l0):
    for k in range(7):
        joint = run_protocol(6, l0, 0.8, None, k)
        assert number_conserved(joint)
        support = joint.number_support()
        assert support.min() >= l0 and support.max() <= l0 + 5


def test_custom_unitary_conserves_number():
    U = TwoLevelUnitary.from_matrix([[0.6, 0.8j], [0.8j, 0.6]])
    assert number_conserved(run_protocol(5, 0, 0.0, U, 5))


@pytest.mark.parametrize("phi", [0.0, 2 * math.pi])
def test_group_phase_trivial_angles(phi):
    joint = run_protocol(3, 2, 0.5, None, 2)
    np.testing.assert_allclose(apply_group_phase(joint, phi).amps, joint.amps, atol=1e-12)


@pytest.mark.parametrize("phi", [0.3, 1.0, 2.9])
def test_group_phase_commutes_with_dilation(phi, hadamard):
    joint = init_joint(make_reservoir(32, 0, 0.0), 4)
    for _ in range(4):
        before = attach_and_interact(apply_group_phase(joint, phi), hadamard)
        after = apply_group_phase(attach_and_interact(joint, hadamard), phi)
        np.testing.assert_allclose(before.amps, after.amps, atol=1e-12)
        joint = after


def test_group_phase_keeps_populations():
    joint = run_protocol(4, 0, 0.0, None, 3)
    rotated = apply_group_phase(joint, 1.234)
    assert rotated.norm() == pytest.approx(1)
    assert rotated.number_populations() == pytest.approx(joint.number_populations())


def test_projection_examples():
    bare = project_targets(run_protocol(3, 0, 0.0, None, 0), 0.0)
    assert bare.norm_squared() == pytest.approx(1)

    projected = project_targets(run_protocol(2, 0, 0.0, None, 1), 0.0)
    assert projected.base == -1
    np.testing.assert_allclose(projected.amps, np.array([1, 2, 1]) / (2 * math.sqrt(2)))
    assert projected.norm_squared() == pytest.approx(0.75)


@pytest.mark.parametrize("k", range(7))
def test_projection_matches_binomial(k):
    projected = project_targets(run_protocol(8, 3, 0.0, None, k), 0.0)
    oracle = apply_half_shift_binomial(make_reservoir(8, 3, 0.0), k, -1)
    assert projected.base == oracle.base
    np.testing.assert_allclose(projected.amps, oracle.amps, atol=1e-12)


def test_projection_with_phase_is_rotated_binomial():
    theta, l0, k = 0.9, 2, 4
    projected = project_targets(run_protocol(8, l0, theta, None, k), theta)
    oracle = apply_half_shift_binomial(make_reservoir(8, l0, 0.0), k, -1)
    rotated = oracle.amps * np.exp(1j * theta * (oracle.levels() - l0))
    np.testing.assert_allclose(projected.amps, rotated, atol=1e-12)


def test_projection_contracts_norm(rng):
    for _ in range(5):
        theta = rng.uniform(0, 2 * math.pi)
        joint = run_protocol(5, 0, rng.uniform(0, 6), None, 3)
        assert project_targets(joint, theta).norm_squared() <= 1 + 1e-12


def test_mirrored_convention_grows_window_upwards(hadamard):
    joint = run_protocol(4, 0, 0.0, hadamard, 3, ShiftConvention.MIRRORED)
    assert joint.base == 0 and joint.dim == 7
    assert joint.norm() == pytest.approx(1)
    standard = project_targets(run_protocol(4, 0, 0.0, hadamard, 3), 0.0)
    mirrored = project_targets(joint, 0.0)
    assert mirrored.norm_squared() == pytest.approx(standard.norm_squared(), abs=1e-12)
    assert mirrored.base != standard.base
