import itertools

import numpy as np
import pytest

from bethe_ring import (
    IKSingularityError,
    ModelParams,
    b_sigma,
    f_kernel,
    f_prod,
    g_fn,
    gamma_det,
    one_point_fast,
    verify_identities,
)
from bethe_ring.basis import amplitude
from bethe_ring.dynamics import one_point_profile_naive
from bethe_ring.fastpoint import (
    check_ggfl_on_spectrum,
    naive_inner_profile,
    one_point_fast_profile,
    pair_tables,
    pair_weight,
)

from conftest import get_spectrum, random_unimodularish


def test_b_sigma_single_entry():
    xi = (0.7 + 0.4j,)
    assert b_sigma((0,), xi, 0.3) == xi[0]


def test_b_sigma_free_identity_example():
    a, b = 0.8 + 0.1j, -0.5 + 0.9j
    got = b_sigma((0, 1), (a, b), 0.0)
    assert abs(got - (1 + a * b) * a * b ** 2) < 1e-14


def test_b_sigma_amplitude_relation():
    # B_sigma = A_sigma * prod_{i<j} cross(x_i, x_j) * prod_j x_{sigma(j)}^(j+1)
    rng = np.random.default_rng(4)
    delta = 0.21
    for n in (2, 3):
        xi = random_unimodularish(rng, n)
        pref = 1.0 + 0j
        for i in range(n):
            for j in range(i + 1, n):
                pref *= 1 + xi[i] * xi[j] - 2 * delta * xi[i]
        for sigma in itertools.permutations(range(n)):
            mono = np.prod([xi[sigma[j]] ** (j + 1) for j in range(n)])
            want = amplitude(sigma, xi, delta) * pref * mono
            assert abs(b_sigma(sigma, xi, delta) - want) < 1e-11 * max(1.0, abs(want))


def test_f_prod_conventions():
    a, b, c, d = 2.0 + 0j, 3.0 + 0j, 5.0 + 0j, 7.0 + 0j
    assert f_prod((a, b), (c, d), (), ()) == 1.0
    assert f_prod((a, b), (c, d), (0, 1), (0, 1)) == a * b * c * d
    assert f_prod((a, b), (c, d), (0,), (1,)) == a * d
    with pytest.raises(ValueError):
        f_prod((a, b), (c, d), (0,), (0, 1))


def test_g_fn_examples():
    xi = (0.5 + 0.2j, -1.1 + 0.7j)
    delta = 0.17
    assert g_fn(xi, ((0, 1),), delta) == 1.0
    want01 = 1 + xi[0] * xi[1] - 2 * delta * xi[0]
    assert abs(g_fn(xi, ((0,), (1,)), delta) - want01) < 1e-15
    want10 = -(1 + xi[1] * xi[0] - 2 * delta * xi[1])
    assert abs(g_fn(xi, ((1,), (0,)), delta) - want10) < 1e-15
    with pytest.raises(ValueError):
        g_fn(xi, ((0,), (0, 1)), delta)


def test_gamma_det_small_cases():
    assert gamma_det((), (), 0.3) == 1.0
    xi, zeta = 0.6 + 0.3j, -0.8 + 0.2j
    assert abs(gamma_det((xi,), (zeta,), 0.3) - 1 / (1 - xi * zeta)) < 1e-14


def test_gamma_det_matches_cofactor():
    rng = np.random.default_rng(6)
    delta = 0.12
    x = random_unimodularish(rng, 2)
    z = random_unimodularish(rng, 2)
    M = np.empty((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            k = 1 - j
            M[i, j] = (x[i] + z[k] - 2 * delta * x[i] * z[k]) / (1 - x[i] * z[j])
    want = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    got = gamma_det(x, z, delta)
    assert abs(got - want) < 1e-12 * abs(want)


def test_gamma_det_singularity_carries_pair():
    with pytest.raises(IKSingularityError) as info:
        gamma_det((2.0 + 0j, 1.0 + 0j), (0.3 + 0j, 0.5 + 0j), 0.1)
    assert info.value.pair == (0, 1)


def test_kernel_single_particle_reduction():
    params = ModelParams(5, 1, 0.3)
    xi = (0.9 * np.exp(0.4j),)
    zeta = (1.1 * np.exp(-1.2j),)
    from bethe_ring.basis import energy

    for x in range(5):
        for t in (0.0, 0.8):
            phase = np.exp(-1j * t * (energy(xi, 0.3) - energy(zeta, 0.3)))
            want = phase * (xi[0] * zeta[0]) ** x
            got = f_kernel(x, t, xi, zeta, params)
            assert abs(got - want) < 1e-12 * max(1.0, abs(want))


def test_kernel_equal_pair_time_independent():
    spec = get_spectrum(7, 2, 0.1)
    params = spec.params
    root = spec.roots[3]
    vals = {t: f_kernel(2, t, root, root, params) for t in (0.0, 1.7)}
    assert abs(vals[0.0] - vals[1.7]) < 1e-12 * max(1.0, abs(vals[0.0]))


def test_kernel_matches_direct_inner_sum_per_pair():
    # the site-restricted inner sum collapses to the kernel, pair by pair
    spec = get_spectrum(7, 2, 0.1)
    params = spec.params
    checked = 0
    for r1 in spec.roots[:6]:
        for r2 in spec.roots[:6]:
            try:
                W, F1N = pair_weight(r1, r2, params.delta)
            except IKSingularityError:
                continue
            direct = naive_inner_profile(r1, r2, params)
            for x in range(7):
                want = direct[x]
                got = W * F1N ** x
                assert abs(got - want) < 1e-9 * max(1.0, abs(want))
            checked += 1
    assert checked > 20


def test_fast_initial_indicator():
    spec = get_spectrum(7, 2, 0.1)
    y = (2, 4)
    for x in range(7):
        want = 1.0 if x in y else 0.0
        assert one_point_fast(x, 0.0, y, spec) == pytest.approx(want, abs=1e-6)


def test_fast_sum_rule():
    spec = get_spectrum(7, 2, 0.1)
    prof, _ = one_point_fast_profile([0.0, 0.6, 2.0], (2, 4), spec)
    assert np.allclose(prof.sum(axis=1), 2.0, atol=1e-6)


def test_fast_equals_naive_and_diagnostics():
    spec = get_spectrum(7, 2, 0.1)
    y = (2, 4)
    ts = [0.0, 0.5, 2.0]
    fast, diag = one_point_fast_profile(ts, y, spec)
    naive = np.array([one_point_profile_naive(t, y, spec) for t in ts])
    assert np.max(np.abs(fast - naive)) <= 1e-6
    assert diag["max_imag_residue"] <= 1e-8
    assert diag["fallback_pairs"] > 0  # inverse-related classes make exact singular pairs


def test_fallback_pairs_counted_at_free_point():
    spec = get_spectrum(5, 2, 0.0)
    tables = pair_tables(spec, (1, 3))
    assert tables.fallback_pairs > 0
    fast, diag = one_point_fast_profile([0.4], (1, 3), spec)
    naive = one_point_profile_naive(0.4, (1, 3), spec)
    assert np.max(np.abs(fast[0] - naive)) <= 1e-6


def test_identity_suite_random_tuples():
    report = verify_identities(3, 60, seed=123, delta=0.1,
                               spectrum=get_spectrum(7, 2, 0.1))
    for name, dev in report.items():
        assert dev <= 1e-9, (name, dev)


def test_subset_telescope_base_case():
    # at n = 1 both sides reduce to 1/(xi*zeta - 1)
    from bethe_ring.fastpoint import _check_subset_telescope

    xi, zeta = (0.8 + 0.4j,), (1.2 - 0.3j,)
    lhs = -gamma_det(xi, zeta, 0.2)
    rhs = (xi[0] * zeta[0]) ** (-1) * gamma_det((1 / xi[0],), (1 / zeta[0],), 0.2)
    want = 1 / (xi[0] * zeta[0] - 1)
    assert abs(lhs - want) < 1e-13
    assert abs(rhs - want) < 1e-13
    assert _check_subset_telescope(xi, zeta, 0.2) < 1e-12


def test_ik_sum_base_case():
    # at n = 1: B*B/(1 - xi*zeta) = xi*zeta * Gamma
    xi, zeta = (0.9 + 0.2j,), (0.7 - 0.5j,)
    delta = 0.15
    lhs = b_sigma((0,), xi, delta) * b_sigma((0,), zeta, delta) / (1 - xi[0] * zeta[0])
    rhs = xi[0] * zeta[0] * gamma_det(xi, zeta, delta)
    assert abs(lhs - rhs) < 1e-14


def test_ggfl_on_spectrum_roots():
    assert check_ggfl_on_spectrum(get_spectrum(7, 2, 0.1)) <= 1e-9
