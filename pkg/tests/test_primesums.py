import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ltensor.characters import character_from_label, enumerate_characters
from ltensor.lfunctions import l_log_derivative
from ltensor.primesums import (
    TruncationError,
    dirichlet_log_sum,
    prime_power_table,
    prime_powers,
    primes_upto,
    tail_estimate,
    von_mangoldt_sum,
)

CATALAN = 0.915965594177219015054603514932  # mpmath.catalan


def trial_division_primes(n):
    return [k for k in range(2, n + 1) if all(k % d for d in range(2, math.isqrt(k) + 1))]


def test_prime_powers_small():
    assert [t.value for t in prime_powers(10)] == [2, 3, 4, 5, 7, 8, 9]
    assert [(t.p, t.m) for t in prime_powers(2)] == [(2, 1)]
    assert list(prime_powers(1)) == []


@pytest.mark.parametrize("n", [2, 97, 1000, 65537, 100_000])
def test_prime_count_matches_trial_division(n):
    if n > 20000:
        # trial division to 1e5 is slow in pure python; count by an independent sieve
        flags = bytearray([1]) * (n + 1)
        flags[0:2] = b"\x00\x00"
        for i in range(2, math.isqrt(n) + 1):
            if flags[i]:
                flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
        expected = sum(flags)
    else:
        expected = len(trial_division_primes(n))
    assert len(primes_upto(n)) == expected


def test_segmented_sieve_crosses_segments():
    p = primes_upto(600_000)
    assert np.all(np.diff(p) > 0)
    assert p[-1] == 599999
    assert len(p) == 49098


def test_von_mangoldt_examples(chi4):
    val, _ = von_mangoldt_sum(chi4, 2, 1, 4)
    assert abs(val - (-math.log(3) / 9)) < 1e-15
    val, _ = von_mangoldt_sum(chi4, 2, 1, 1)
    assert val == 0


def test_von_mangoldt_against_log_derivative(chi4):
    val, tail = von_mangoldt_sum(chi4, 2, 1, 1_000_000)
    # sum Lambda(n) chi(n) n^{-s} = -(L'/L)(s); mpmath oracle: (L'/L)(2) = 0.0890652843678850...
    assert abs(val + 0.0890652843678850377557712153287) < 1e-8
    assert abs(val + l_log_derivative(chi4, 2)) < 1e-8


def test_dirichlet_log_sum_examples(chi4):
    val, _ = dirichlet_log_sum(chi4, 2, 1_000_000)
    assert abs(np.exp(val) - CATALAN) < 1e-9
    assert dirichlet_log_sum(chi4, 2, 1)[0] == 0
    chi5 = character_from_label("5.1")
    val, _ = dirichlet_log_sum(chi5, 3, 10_000)
    euler = 1.0
    for p in primes_upto(10_000):
        euler *= 1 / (1 - chi5(int(p)) * float(p) ** -3)
    assert abs(np.exp(val) / euler - 1) < 1e-12


def test_truncation_guard(chi4):
    with pytest.raises(TruncationError):
        von_mangoldt_sum(chi4, 1.0, 1, 100)
    with pytest.raises(TruncationError):
        dirichlet_log_sum(chi4, 0.5 + 3j, 100)


def test_tail_estimate_examples():
    assert tail_estimate(4, 3, 1_000_000) < 1e-15
    bounds = [tail_estimate(2.5, 2, L) for L in (10**3, 10**4, 10**5, 10**6)]
    assert all(a > b for a, b in zip(bounds, bounds[1:]))


@given(st.floats(1.6, 5.0), st.floats(-3.0, 3.0), st.floats(0.5, 4.0), st.sampled_from([300, 1000, 3000]))
def test_tail_bound_covers_partial_sums(sigma, t, w, L):
    chi = character_from_label("5.1")
    s = complex(sigma, t)
    a, _ = von_mangoldt_sum(chi, s, w, L)
    b, _ = von_mangoldt_sum(chi, s, w, 10 * L)
    assert abs(a - b) <= tail_estimate(s, w, L)


@given(st.floats(1.5, 4.0), st.floats(-5.0, 5.0))
def test_linear_in_character_table(sigma, t):
    c1, c2 = enumerate_characters(5)[1], enumerate_characters(5)[2]
    s = complex(sigma, t)
    table = prime_power_table(20_000)
    c = table.log_value
    combined = (c1.values[table.value % 5] + c2.values[table.value % 5]) * np.exp(-s * c) * table.log_p
    total = math.fsum(combined.real) + 1j * math.fsum(combined.imag)
    a, _ = von_mangoldt_sum(c1, s, 1, 20_000)
    b, _ = von_mangoldt_sum(c2, s, 1, 20_000)
    assert abs(total - (a + b)) < 1e-12


def test_summation_order_independent(chi3):
    table = prime_power_table(100_000)
    terms = table.character_values(chi3) * np.exp(-1.3 * table.log_value) * table.log_p
    fwd = math.fsum(terms.real)
    rev = math.fsum(terms.real[::-1])
    assert abs(fwd - rev) <= 1e-12 * abs(fwd)
