import numpy as np
import pytest
import scipy.linalg

from bethe_ring import (
    config_probability,
    config_rank,
    dense_sector_matrix,
    enumerate_configurations,
    one_point_naive,
    wavefunction,
)
from bethe_ring.dynamics import one_point_profile_naive

from conftest import get_spectrum


def test_initial_condition_is_delta():
    spec = get_spectrum(7, 2, 0.1)
    y = (2, 5)
    psi = wavefunction(0.0, y, spec)
    want = np.zeros(21)
    want[config_rank(y, spec.params)] = 1.0
    assert np.max(np.abs(psi.amplitudes - want)) < 1e-10


def test_single_particle_unitarity():
    spec = get_spectrum(5, 1, 0.2)
    for t in (0.3, 2.0, 11.0):
        assert wavefunction(t, (1,), spec).norm() == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("L,N,delta", [(7, 2, 0.0), (7, 2, 0.1), (7, 3, 0.04)])
def test_unitarity_suite(L, N, delta):
    spec = get_spectrum(L, N, delta)
    y = tuple(range(N))
    for t in (0.1, 1.0, 10.0):
        assert abs(wavefunction(t, y, spec).norm() - 1.0) <= 1e-9


@pytest.mark.parametrize("L,N,delta,ts", [
    (7, 2, 0.1, (0.5, 2.0)),
    (7, 3, 0.04, (0.5,)),
])
def test_matrix_exponential_oracle(L, N, delta, ts):
    spec = get_spectrum(L, N, delta)
    params = spec.params
    y = (1, 3, 5)[:N]
    H = dense_sector_matrix(params)
    e0 = np.zeros(params.sector_dim, dtype=complex)
    e0[config_rank(y, params)] = 1.0
    for t in ts:
        expected = scipy.linalg.expm(-1j * t * H) @ e0
        got = wavefunction(t, y, spec).amplitudes
        assert np.max(np.abs(got - expected)) <= 1e-6


def test_config_probability_initial_values():
    spec = get_spectrum(7, 2, 0.1)
    y = (0, 4)
    assert config_probability(0.0, y, y, spec) == pytest.approx(1.0, abs=1e-8)
    assert config_probability(0.0, y, (1, 4), spec) == pytest.approx(0.0, abs=1e-8)


def test_config_probability_normalization():
    spec = get_spectrum(7, 2, 0.1)
    y = (0, 4)
    total = sum(config_probability(0.7, y, x, spec)
                for x in enumerate_configurations(spec.params))
    assert total == pytest.approx(1.0, abs=1e-9)


def test_one_point_initial_indicator():
    spec = get_spectrum(7, 3, 0.04)
    y = (1, 2, 5)
    for x in range(7):
        want = 1.0 if x in y else 0.0
        assert one_point_naive(x, 0.0, y, spec) == pytest.approx(want, abs=1e-8)


def test_one_point_particle_number_sum_rule():
    spec = get_spectrum(7, 2, 0.1)
    y = (2, 4)
    for t in (0.0, 0.7, 3.3):
        prof = one_point_profile_naive(t, y, spec)
        assert prof.sum() == pytest.approx(2.0, abs=1e-8)
        assert np.all(prof > -1e-8)
        assert np.all(prof < 1 + 1e-8)


def test_one_point_translation_covariance():
    spec = get_spectrum(7, 2, 0.1)
    y = (2, 4)
    t = 0.9
    for x in range(7):
        shifted_y = tuple(sorted((s - x) % 7 for s in y))
        lhs = one_point_naive(x, t, y, spec)
        rhs = one_point_naive(0, t, shifted_y, spec)
        assert lhs == pytest.approx(rhs, abs=1e-8)


def test_one_point_rejects_bad_site():
    spec = get_spectrum(7, 2, 0.1)
    with pytest.raises(ValueError):
        one_point_naive(7, 0.0, (2, 4), spec)
