import math

import pytest
from hypothesis import given, settings, strategies as st

from cmtorsion.arith import (
    euler_phi,
    is_prime,
    kronecker,
    least_nonresidue,
    primes_between,
    primes_in_progression,
    primes_up_to,
)

from conftest import legendre_by_euler, trial_division_is_prime


def test_is_prime_small_agrees_with_trial_division():
    for n in range(0, 5000):
        assert is_prime(n) == trial_division_is_prime(n), n


def test_is_prime_trivia():
    assert is_prime(2)
    assert not is_prime(1)
    assert not is_prime(0)


def test_is_prime_near_5_5e9():
    for n in range(5_500_000_000, 5_500_000_120):
        assert is_prime(n) == trial_division_is_prime(n), n


def test_is_prime_strong_pseudoprimes():
    # Carmichael numbers and strong pseudoprimes to several small bases
    for n in (561, 1105, 1729, 2047, 3215031751, 3825123056546413051,
              318665857834031151167461):
        assert not is_prime(n), n


def test_is_prime_large_known():
    assert is_prime(2**61 - 1)
    assert is_prime(2**89 - 1)
    assert is_prime(2**127 - 1)
    assert not is_prime((2**61 - 1) * (2**67 - 1))


@given(st.integers(min_value=2, max_value=10**6))
def test_is_prime_property(n):
    assert is_prime(n) == trial_division_is_prime(n)


def test_euler_phi_examples():
    assert euler_phi(1) == 1
    assert euler_phi(7) == 6
    assert euler_phi(91) == sum(1 for k in range(1, 92) if math.gcd(k, 91) == 1) == 72


def test_euler_phi_rejects_zero():
    with pytest.raises(ValueError):
        euler_phi(0)


@given(st.integers(min_value=1, max_value=3000))
def test_euler_phi_gcd_count(n):
    assert euler_phi(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_euler_phi_two_primes():
    ps = primes_up_to(100)
    for p in ps:
        for q in ps:
            if p != q:
                assert euler_phi(p * q) == (p - 1) * (q - 1)


def test_kronecker_examples():
    assert kronecker(-7, 23) == 1 == legendre_by_euler(-7, 23)
    assert kronecker(-11, 11) == 0
    assert kronecker(-3, 5) == -1


def test_kronecker_matches_euler_on_odd_primes():
    for p in primes_between(3, 300):
        for D in range(-300, 300):
            assert kronecker(D, p) == legendre_by_euler(D, p), (D, p)


def test_kronecker_zero_iff_common_factor():
    for D in range(-60, 61):
        for n in range(1, 61):
            assert (kronecker(D, n) == 0) == (math.gcd(D, n) > 1), (D, n)


def test_kronecker_multiplicative_exhaustive():
    rng = [D for D in range(-50, 51) if D != 0]
    for n in range(1, 51):
        for D1 in rng:
            for D2 in rng:
                if math.gcd(D1 * D2, n) == 1:
                    assert kronecker(D1 * D2, n) == kronecker(D1, n) * kronecker(D2, n)
    for D in rng:
        for n1 in range(1, 51):
            for n2 in range(1, 51):
                if math.gcd(D, n1 * n2) == 1:
                    assert kronecker(D, n1 * n2) == kronecker(D, n1) * kronecker(D, n2)


def test_kronecker_at_two():
    # (D/2) depends only on D mod 8 for odd D
    for D in range(-41, 42, 2):
        assert kronecker(D, 2) == (1 if D % 8 in (1, 7) else -1)


def test_half_the_residues_are_squares():
    for N in primes_between(3, 199):
        assert sum(1 for a in range(1, N) if kronecker(a, N) == 1) == (N - 1) // 2


def test_least_nonresidue_examples():
    assert least_nonresidue(7) == 3
    assert least_nonresidue(23) == 5
    assert least_nonresidue(5) == 2


def test_least_nonresidue_brute_force_and_trivial_bound():
    for N in primes_between(3, 5000):
        M = least_nonresidue(N)
        assert M == next(m for m in range(2, N) if legendre_by_euler(m, N) == -1)
        assert M < N / 2 + 1


@pytest.mark.parametrize("bad", [1, 2, 9, 15])
def test_least_nonresidue_rejects(bad):
    with pytest.raises(ValueError):
        least_nonresidue(bad)


def test_primes_in_progression():
    assert primes_in_progression(1, 3, 3) == [7, 13, 19]
    assert primes_in_progression(7, 8, 1) == [7]
    assert primes_in_progression(1, 4, 4) == [5, 13, 17, 29]


@settings(max_examples=50)
@given(st.integers(min_value=2, max_value=40), st.integers(min_value=0, max_value=39),
       st.integers(min_value=1, max_value=20))
def test_primes_in_progression_matches_sieve(m, a, count):
    a %= m
    if math.gcd(a, m) != 1:
        with pytest.raises(ValueError):
            primes_in_progression(a, m, count)
        return
    got = primes_in_progression(a, m, count)
    expect = [p for p in range(2, 10**5) if p % m == a and trial_division_is_prime(p)][:count]
    assert got == expect


def test_primes_up_to_and_between():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_between(10, 30) == [11, 13, 17, 19, 23, 29]
