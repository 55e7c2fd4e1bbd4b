import math

import numpy as np
import pytest

from bethe_ring import ModelParams, canonicalize, config_rank, config_unrank, enumerate_configurations
from bethe_ring.core import (
    DegenerateRootError,
    KahanSum,
    check_pairwise_distinct,
    class_distance,
    cpow,
    find_duplicate_classes,
    validate_configuration,
)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(5, 0, 0.0)
    with pytest.raises(ValueError):
        ModelParams(5, 6, 0.0)
    with pytest.raises(ValueError):
        ModelParams(5, 2, 0.0, solver_tol=0.0)
    assert ModelParams(6, 2, 0.0).even_length
    assert not ModelParams(7, 2, 0.0).even_length


def test_enumerate_singletons():
    assert enumerate_configurations(ModelParams(3, 1, 0.0)) == [(0,), (1,), (2,)]


def test_enumerate_l4_n2():
    assert enumerate_configurations(ModelParams(4, 2, 0.0)) == [
        (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_enumerate_count_21_3():
    # binomial(21, 3) computed independently
    assert len(enumerate_configurations(ModelParams(21, 3, 0.0))) == math.comb(21, 3)


def test_rank_examples():
    p = ModelParams(4, 2, 0.0)
    assert config_rank((0, 1), p) == 0
    assert config_rank((0, 2), p) == 1
    assert config_rank((2, 3), p) == 5


@pytest.mark.parametrize("L,N", [(5, 1), (7, 2), (7, 3)])
def test_rank_unrank_roundtrip_exhaustive(L, N):
    p = ModelParams(L, N, 0.0)
    for r, c in enumerate(enumerate_configurations(p)):
        assert config_rank(c, p) == r
        assert config_unrank(r, p) == c


def test_invalid_configuration():
    p = ModelParams(5, 2, 0.0)
    with pytest.raises(ValueError):
        validate_configuration((2, 2), p)
    with pytest.raises(ValueError):
        validate_configuration((3, 1), p)
    with pytest.raises(ValueError):
        validate_configuration((0, 5), p)
    with pytest.raises(ValueError):
        config_rank((0,), p)


def test_canonicalize_idempotent_and_permutation_invariant():
    rng = np.random.default_rng(7)
    for _ in range(25):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        z = tuple(z)
        c = canonicalize(z)
        assert canonicalize(c) == c
        perm = tuple(np.array(z)[rng.permutation(4)])
        assert canonicalize(perm) == c


def test_canonicalize_orders_by_angle():
    got = canonicalize([1j, 1.0, -1.0])
    assert got == (1.0 + 0j, 1j, -1.0 + 0j)


def test_pairwise_distinct_raises():
    with pytest.raises(DegenerateRootError):
        check_pairwise_distinct((1.0 + 0j, 1.0 + 1e-12j))
    check_pairwise_distinct((1.0 + 0j, 1.0j))


def test_class_distance_is_order_insensitive():
    a = (1.0 + 0j, 1j)
    b = (1j, 1.0 + 1e-11j)
    assert class_distance(a, b) < 1e-10
    assert class_distance(a, (2j, 1.0 + 0j)) > 0.5


def test_find_duplicates():
    a = (1.0 + 0j, 1j)
    b = (1j, 1.0 + 0j)      # same class, different order
    c = (-1.0 + 0j, 1j)
    assert find_duplicate_classes([a, c]) is None
    assert find_duplicate_classes([a, c, b]) == (0, 2)


def test_cpow():
    assert cpow(2.0 + 0j, 10) == 1024.0
    assert abs(cpow(1j, -3) - 1j) < 1e-15
    z = 0.8 + 0.3j
    assert abs(cpow(z, 17) - z ** 17) < 1e-12


def test_kahan_beats_naive_on_adversarial_sum():
    terms = [1e16, 1.0, -1e16, 1.0] * 50
    acc = KahanSum()
    for v in terms:
        acc.add(v)
    assert acc.total.real == 100.0


def test_wavefunction_dimension_check():
    from bethe_ring import WaveFunction

    p = ModelParams(5, 2, 0.0)
    with pytest.raises(ValueError):
        WaveFunction(params=p, amplitudes=np.zeros(3, dtype=complex))
    wf = WaveFunction(params=p, amplitudes=np.ones(10, dtype=complex) / math.sqrt(10),
                      normalized=True)
    assert abs(wf.norm() - 1.0) < 1e-12
    with pytest.raises(ValueError):
        WaveFunction(params=p, amplitudes=np.ones(10, dtype=complex), normalized=True)
