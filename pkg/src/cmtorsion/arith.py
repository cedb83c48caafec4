"""Exact integer primitives: primality, totient, Kronecker symbol, nonresidues."""

from __future__ import annotations

from math import gcd, isqrt

from sympy import factorint
from sympy.ntheory import isprime as _bpsw_isprime

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# (exclusive upper bound, witness set) pairs for which the strong
# pseudoprime test is known to be deterministic.
_WITNESS_TABLE = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318665857834031151167461, _SMALL_PRIMES[:12]),
    (3317044064679887385961981, _SMALL_PRIMES),
)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Below 3.3e24 a fixed witness set makes Miller-Rabin exact. Larger
    inputs fall through to Baillie-PSW, which has no known counterexample.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    for bound, witnesses in _WITNESS_TABLE:
        if n < bound:
            return all(_strong_probable_prime(n, a) for a in witnesses)
    return bool(_bpsw_isprime(n))


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError(f"euler_phi is undefined for n={n}")
    result = n
    for p in factorint(n):
        result -= result // p
    return result


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for any integer D and n >= 1."""
    if n < 1:
        raise ValueError(f"kronecker needs n >= 1, got {n}")
    if n == 1:
        return 1
    if D % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    # factor out powers of two from n using (D/2) = (-1)^((D^2-1)/8) for odd D
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 == 1 and D % 8 in (3, 5):
        result = -result
    # remaining n is odd: Jacobi symbol with the usual reductions
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def least_nonresidue(N: int) -> int:
    """Smallest M >= 2 which is a quadratic nonresidue mod the odd prime N."""
    if N < 3 or not is_prime(N):
        raise ValueError(f"{N} is not an odd prime")
    M = 2
    while kronecker(M, N) != -1:
        M += 1
    if not is_prime(M):
        raise AssertionError(f"least nonresidue {M} mod {N} is not prime")
    if any(M % (p * p) == 0 for p in range(2, isqrt(M) + 1)):
        raise AssertionError(f"least nonresidue {M} mod {N} is not squarefree")
    return M


def primes_in_progression(a: int, m: int, count: int) -> list[int]:
    """The first ``count`` primes congruent to a mod m, ascending."""
    if m < 1 or gcd(a, m) != 1:
        raise ValueError(f"gcd({a}, {m}) != 1")
    found: list[int] = []
    if count <= 0:
        return found
    r = a % m
    # the residue class r itself may hold 1 or 2, so start from the least
    # positive representative and step by m
    k = r if r > 0 else m
    while len(found) < count:
        if is_prime(k):
            found.append(k)
        k += m
    return found


def prime_sieve(limit: int) -> bytearray:
    """Flags indexed 0..limit; 1 marks a prime."""
    flags = bytearray([1]) * (limit + 1)
    flags[: min(2, limit + 1)] = bytes(min(2, limit + 1))
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return flags


def primes_up_to(limit: int) -> list[int]:
    if limit < 2:
        return []
    flags = prime_sieve(limit)
    return [i for i in range(2, limit + 1) if flags[i]]


def primes_between(lo: int, hi: int) -> list[int]:
    return [p for p in primes_up_to(hi) if p >= lo]
