import math

import numpy as np
import pytest

from catcoh.errors import InvalidParameterError
from catcoh.quantum.ladder import dirichlet_overlap
from catcoh.quantum.systems import (
    collective_overlap_magnitude,
    crossover_k,
    crossover_k_estimate,
    log_reservoir_overlap,
    log_single_overlap,
    make_psi,
    product_target,
    psi_overlap,
)

ROOT = 1 / math.sqrt(2)


@pytest.mark.parametrize(
    "theta, amp1",
    [(0.0, ROOT), (math.pi, -ROOT), (math.pi / 2, 1j * ROOT)],
)
def test_make_psi(theta, amp1):
    psi = make_psi(theta)
    assert psi.amp0 == pytest.approx(ROOT)
    assert psi.amp1 == pytest.approx(amp1, abs=1e-15)


def test_psi_overlap_values():
    assert psi_overlap(0.4, 0.4) == pytest.approx(1)
    assert abs(psi_overlap(0.0, math.pi)) < 1e-15
    assert abs(psi_overlap(0.0, math.pi / 2)) == pytest.approx(ROOT)


def test_psi_overlap_depends_on_difference_only():
    assert psi_overlap(1.0, 1.7) == pytest.approx(psi_overlap(-3.0, -2.3), abs=1e-15)


def test_collective_overlap_examples():
    assert collective_overlap_magnitude(0.3, 2.0, 0) == 1.0
    assert collective_overlap_magnitude(0.0, math.pi / 2, 3) == pytest.approx(ROOT**3)
    assert collective_overlap_magnitude(0.0, math.pi / 3, 1) == pytest.approx(0.8660254037844386)


@pytest.mark.parametrize("k", [1, 5, 64])
def test_collective_overlap_is_power(k):
    value = collective_overlap_magnitude(0.2, 1.3, k)
    assert value == pytest.approx(abs(psi_overlap(0.2, 1.3)) ** k, abs=1e-12)


def test_collective_overlap_nonincreasing():
    values = [collective_overlap_magnitude(0.0, 0.9, k) for k in range(30)]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_product_target_matches_explicit_kron():
    vec = product_target(0.6, 3)
    single = make_psi(0.6).vector()
    np.testing.assert_allclose(vec, np.kron(np.kron(single, single), single))
    assert product_target(0.6, 0).tolist() == [1]


def test_crossover_none_for_orthogonal_reservoir():
    assert crossover_k(4, math.pi / 2) is None
    assert crossover_k(2, math.pi) is None


def test_crossover_first_step_when_single_overlap_vanishes():
    assert crossover_k(3, math.pi) == 1


def test_crossover_matches_log_estimate():
    delta = math.pi / 3
    k_star = crossover_k(64, delta)
    reservoir = abs(dirichlet_overlap(64, delta))
    single = math.cos(delta / 2)
    assert k_star == crossover_k_estimate(64, delta)
    assert single**k_star < reservoir <= single ** (k_star - 1)


@pytest.mark.parametrize("L", [8, 64])
def test_crossover_resolves_tiny_delta(L):
    # cos(delta/2) rounds to 1.0 here; the crossover sits near (L^2 - 1)/3
    delta = 1e-9
    assert math.cos(delta / 2) == 1.0
    assert crossover_k(L, delta) in ((L * L - 1) // 3, (L * L - 1) // 3 + 1)
    assert crossover_k_estimate(L, delta) is None


@pytest.mark.parametrize("L", [4, 16, 64])
@pytest.mark.parametrize("delta", [1e-3, 0.05, 1.0, 2.5, 4.0])
def test_crossover_matches_direct_powers(L, delta):
    reservoir = abs(dirichlet_overlap(L, delta))
    single = abs(math.cos(delta / 2))
    k = 1
    while single**k >= reservoir:
        k += 1
    assert crossover_k(L, delta) == k


def test_log_overlaps_match_direct_values():
    for delta in (0.3, 1.7, -2.0, 7.0):
        assert log_single_overlap(delta) == pytest.approx(math.log(abs(math.cos(delta / 2))))
        assert log_reservoir_overlap(16, delta) == pytest.approx(
            math.log(abs(dirichlet_overlap(16, delta)))
        )
    assert log_reservoir_overlap(64, 1e-9) == pytest.approx(-(64**2 - 1) * 1e-18 / 24)
    assert log_single_overlap(1e-9) == pytest.approx(-1e-18 / 8)


def test_crossover_rejects_trivial_delta():
    with pytest.raises(InvalidParameterError):
        crossover_k(8, 0.0)
    with pytest.raises(InvalidParameterError):
        crossover_k(8, 2 * math.pi)
