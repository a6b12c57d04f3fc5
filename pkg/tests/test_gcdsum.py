import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gallab import (
    IntegerSet,
    WeightFunction,
    additive_energy,
    gcd_sum_divisor,
    gcd_sum_naive,
    gcd_sum_of_differences,
    gen_interval,
    gen_random_subset,
    theorem4_ratio,
)
from gallab.arith import factorize
from gallab.errors import InvalidArgument
from gallab.gcdsum import gcd_kernel, jordan_weight

import oracles

ALPHAS = [0.5, 0.6, 0.75, 1.0]


def close(x, y, rel=1e-9):
    return abs(x - y) <= rel * (abs(y) + 1)


def random_weights(rng, size, top, complex_values=True):
    keys = sorted(set(rng.integers(1, top + 1, size).tolist()))
    re = rng.normal(size=len(keys))
    im = rng.normal(size=len(keys)) if complex_values else np.zeros(len(keys))
    return WeightFunction(tuple((k, complex(a, b)) for k, a, b in zip(keys, re, im)))


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("method", [gcd_sum_naive, gcd_sum_divisor])
def test_singleton(method, alpha):
    f = WeightFunction(((12, 3 - 4j),))
    assert method(f, alpha).value == pytest.approx(25.0, rel=1e-14)


@pytest.mark.parametrize("method", [gcd_sum_naive, gcd_sum_divisor])
def test_one_two_half(method):
    rep = method(WeightFunction.indicator([1, 2]), 0.5)
    assert rep.value.real == pytest.approx(2 + math.sqrt(2), rel=1e-14)
    assert rep.value.imag == 0


def test_coprime_alpha_one():
    A = [2, 3, 5, 7, 11, 13]
    expected = len(A) + sum(1 / (a * b) for a in A for b in A if a != b)
    for method in (gcd_sum_naive, gcd_sum_divisor):
        assert method(WeightFunction.indicator(A), 1.0).value.real == pytest.approx(expected, rel=1e-13)


def test_naive_matches_loop():
    rng = np.random.default_rng(5)
    for alpha in ALPHAS:
        f = random_weights(rng, 30, 500)
        assert close(gcd_sum_naive(f, alpha).value, oracles.gcd_sum_loop(f.keys, f.values, alpha), 1e-12)


def test_jordan_weight_is_mobius_convolution():
    for d in range(1, 200):
        for alpha in (0.5, 0.6, 1.0):
            assert jordan_weight(factorize(d), alpha) == pytest.approx(oracles.g_alpha_convolution(d, alpha), rel=1e-10)


def test_divisor_paths_agree():
    # dense sieve vs sparse divisor walk on the same input
    from gallab.gcdsum import _divisor_dense, _divisor_sparse

    rng = np.random.default_rng(9)
    f = random_weights(rng, 300, 2000)
    for alpha in ALPHAS:
        a = _divisor_dense(f.keys, f.values, alpha)
        b = _divisor_sparse(f.keys, f.values, alpha)
        assert close(a, b, 1e-12)


def test_large_support_elements():
    f = WeightFunction(((2**40, 1.0), (3 * 2**40, 2.0), (2**54 + 2, 1.0), (3 * (2**54 + 2), 1.0)))
    for alpha in (0.5, 1.0):
        a = gcd_sum_naive(f, alpha).value.real
        b = gcd_sum_divisor(f, alpha).value.real
        assert close(a, b, 1e-9)
    assert gcd_kernel(3 * (2**54 + 2), 2**54 + 2, 0.5) == pytest.approx(1 / math.sqrt(3), rel=1e-12)


@pytest.mark.parametrize("method", [gcd_sum_naive, gcd_sum_divisor])
def test_alpha_out_of_range(method):
    for alpha in (0.0, -0.5, 1.5):
        with pytest.raises(InvalidArgument):
            method(WeightFunction.indicator([1]), alpha)


def test_positive_semidefinite():
    rng = np.random.default_rng(11)
    for _ in range(500):
        f = random_weights(rng, int(rng.integers(1, 25)), 300)
        for alpha in (0.5, 1.0):
            assert gcd_sum_naive(f, alpha).value.real >= -1e-12 * f.l2sq
            assert gcd_sum_divisor(f, alpha).value.real >= 0


def test_real_for_complex_weights():
    rng = np.random.default_rng(12)
    f = random_weights(rng, 50, 1000)
    for alpha in ALPHAS:
        assert gcd_sum_naive(f, alpha).value.imag == 0
        assert gcd_sum_divisor(f, alpha).value.imag == 0


@settings(max_examples=50)
@given(st.sets(st.integers(1, 5000), min_size=1, max_size=40), st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False), st.sampled_from(ALPHAS))
def test_scale_invariance(keys, c, alpha):
    f = WeightFunction.indicator(sorted(keys))
    base = gcd_sum_naive(f, alpha).value.real
    assert gcd_sum_naive(f.scaled(c), alpha).value.real == pytest.approx(abs(c) ** 2 * base, rel=1e-12)
    assert gcd_sum_divisor(f.scaled(c), alpha).value.real == pytest.approx(abs(c) ** 2 * base, rel=1e-12)


@settings(max_examples=50)
@given(st.dictionaries(st.integers(1, 3000), st.floats(0.01, 10), min_size=1, max_size=30))
def test_monotone_in_alpha_for_nonnegative_f(mapping):
    f = WeightFunction.from_mapping(mapping)
    assert gcd_sum_naive(f, 0.5).value.real >= gcd_sum_naive(f, 1.0).value.real * (1 - 1e-12)


def test_differences_examples():
    assert gcd_sum_of_differences(IntegerSet((1, 2)), 0.5).value.real == pytest.approx(1.0)
    A = IntegerSet((1, 2, 3))
    expected = 5 + 2 * math.sqrt(2)
    assert gcd_sum_of_differences(A, 0.5).value.real == pytest.approx(expected, rel=1e-14)
    assert gcd_sum_of_differences(A, 0.5, method="naive").value.real == pytest.approx(expected, rel=1e-14)
    with pytest.raises(InvalidArgument):
        gcd_sum_of_differences(IntegerSet((4,)))


@pytest.mark.parametrize("A", [gen_interval(40), gen_random_subset(10**5, 40, seed=2), IntegerSet(tuple(k * k for k in range(1, 41)))])
def test_differences_at_least_diagonal(A):
    from gallab import rep_function

    diag = sum(c * c for c in rep_function(A).counts.values())
    for alpha in ALPHAS:
        rep = gcd_sum_of_differences(A, alpha)
        assert rep.value.imag == 0 and rep.value.real >= diag
        assert close(rep.value.real, gcd_sum_of_differences(A, alpha, method="naive").value.real)


def test_theorem4_ratio():
    assert theorem4_ratio(IntegerSet((1, 2, 3))) == pytest.approx((5 + 2 * math.sqrt(2)) / 19, rel=1e-14)
    assert theorem4_ratio(IntegerSet((1, 2, 3))) == pytest.approx(0.4120, abs=5e-5)
    with pytest.raises(InvalidArgument):
        theorem4_ratio(IntegerSet((1, 2)))
    for A in (gen_interval(50), gen_random_subset(10**4, 50, seed=1)):
        assert theorem4_ratio(A) > 0
        assert theorem4_ratio(A) == pytest.approx(gcd_sum_of_differences(A).value.real / additive_energy(A))


def test_weight_function_norms():
    f = WeightFunction.from_mapping({3: 3 - 4j, 1: 1, 7: 0})
    assert f.keys == [1, 3]
    assert f.l1 == pytest.approx(6.0) and f.l2sq == pytest.approx(26.0)
    with pytest.raises(InvalidArgument):
        WeightFunction(((2, 1), (1, 1)))
    with pytest.raises(InvalidArgument):
        WeightFunction(((2, 0),))
