"""Analytic experiments on d_CM(N) and on torsion growth.

* the least-nonresidue upper bound for d_CM(N) and its growth exponent;
* inert-prime congruence families on which d_CM(N) / N is unbounded;
* the N_n = p_1 ... p_n torsion sequence over primes 1 mod 3 and its
  Mertens-type growth.

Asymptotic comparisons are monitoring-grade; nothing here proves a density
or an asymptotic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import mpmath
import numpy as np

from .arith import is_prime, kronecker, least_nonresidue, prime_sieve, primes_between
from .degrees import least_cm_degree
from .quadorders import (
    ClassNumberScan,
    class_number,
    decompose,
    discriminants_with_class_number_at_most,
    unit_count,
)

mpmath.mp.dps = 50
EULER_GAMMA = mpmath.mpf(mpmath.euler)
EXP_MINUS_HALF_GAMMA = mpmath.exp(-EULER_GAMMA / 2)

# Reference exponents for d_CM(N) growth, annotations only.
BURGESS_CONSTANT = math.exp(-0.5) / 4
BURGESS_EXPONENT = 1 + BURGESS_CONSTANT / 2
GRH_EXPONENT = 1.0


def nonresidue_discriminant(N: int) -> int:
    """-M or -4M for M the least nonresidue mod N, whichever is a discriminant.

    For N = 3 mod 4 the result splits at N.  For N = 1 mod 4 it is inert
    instead: (-1/N) = 1 there, so no sign flip happens.
    """
    if N < 5 or not is_prime(N):
        raise ValueError(f"N={N} must be a prime >= 5")
    M = least_nonresidue(N)
    D = -M if M % 4 == 3 else -4 * M
    if N % 4 == 3 and kronecker(D, N) != 1:
        raise AssertionError(f"({D}/{N}) should be +1")
    return D


def cm_degree_upper_bound(N: int, check: bool = False) -> int:
    """2 (N-1) h(Q(sqrt D)) for the nonresidue discriminant D."""
    D = nonresidue_discriminant(N)
    bound = 2 * (N - 1) * class_number(decompose(D)[0])
    if check:
        d = least_cm_degree(N).d_cm
        if d > bound:
            raise AssertionError(f"d_CM({N}) = {d} exceeds the upper bound {bound}")
    return bound


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    n_primes: int
    N_min: int
    N_max: int
    burgess_reference: float = BURGESS_EXPONENT
    grh_reference: float = GRH_EXPONENT


def upper_bound_exponent_fit(N_min: int, N_max: int) -> ExponentFit:
    """Least-squares slope of log(upper bound) against log N over primes 3 mod 4."""
    Ns = [N for N in primes_between(max(N_min, 5), N_max) if N % 4 == 3]
    if len(Ns) < 50:
        raise ValueError(f"window [{N_min}, {N_max}] holds only {len(Ns)} primes 3 mod 4; need 50")
    x = np.log(np.array(Ns, dtype=float))
    y = np.log(np.array([cm_degree_upper_bound(N) for N in Ns], dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    return ExponentFit(slope=float(slope), intercept=float(intercept), n_primes=len(Ns),
                       N_min=Ns[0], N_max=Ns[-1])


@dataclass(frozen=True)
class InertFamilySpec:
    H: int
    scan: ClassNumberScan
    P1: tuple[int, ...]
    P3: tuple[int, ...]
    residue_conditions: tuple[tuple[int, tuple[int, ...]], ...]
    predicted_density: Fraction

    @property
    def discriminants(self) -> list[int]:
        return self.scan.discriminants

    def admits(self, N: int) -> bool:
        """Does N satisfy every congruence condition of the family?"""
        return all(N % m in allowed for m, allowed in self.residue_conditions)


def _odd_prime_divisors(n: int) -> set[int]:
    n = abs(n)
    while n % 2 == 0:
        n //= 2
    out, p = set(), 3
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 2
    if n > 1:
        out.add(n)
    return out


def inert_family(H: int, scan_bound: int = 10_000) -> InertFamilySpec:
    """Congruence conditions forcing (D/N) = -1 for every D with h(D) <= H.

    N = 7 mod 8, N a square mod each p = 1 mod 4 dividing some D, and N a
    nonsquare mod each q = 3 mod 4 dividing some D.
    """
    scan = discriminants_with_class_number_at_most(H, scan_bound)
    primes: set[int] = set()
    for D in scan.discriminants:
        primes |= _odd_prime_divisors(D)
    P1 = tuple(sorted(p for p in primes if p % 4 == 1))
    P3 = tuple(sorted(q for q in primes if q % 4 == 3))
    conditions: list[tuple[int, tuple[int, ...]]] = [(8, (7,))]
    for p in P1:
        conditions.append((p, tuple(r for r in range(1, p) if kronecker(r, p) == 1)))
    for q in P3:
        conditions.append((q, tuple(r for r in range(1, q) if kronecker(r, q) == -1)))
    density = Fraction(1, 2 ** (len(P1) + len(P3) + 2))
    return InertFamilySpec(H=H, scan=scan, P1=P1, P3=P3,
                           residue_conditions=tuple(conditions), predicted_density=density)


def verify_inert_prime(N: int, spec: InertFamilySpec) -> bool:
    if N < 3 or not is_prime(N):
        raise ValueError(f"{N} is not an odd prime")
    return all(kronecker(D, N) == -1 for D in spec.discriminants)


@dataclass(frozen=True)
class SieveResult:
    limit: int
    n_primes: int
    family: list[int]
    counterexamples: list[int]
    empirical_density: float
    predicted_density: float

    @property
    def relative_error(self) -> float:
        return abs(self.empirical_density - self.predicted_density) / self.predicted_density


def family_sieve(spec: InertFamilySpec, limit: int) -> SieveResult:
    """Primes <= limit admitted by the congruences, and any that fail the symbol check."""
    flags = np.frombuffer(bytes(prime_sieve(limit)), dtype=np.uint8).astype(bool)
    flags[:3] = False
    n = np.arange(limit + 1)
    keep = flags.copy()
    for m, allowed in spec.residue_conditions:
        keep &= np.isin(n % m, allowed)
    family = [int(N) for N in np.nonzero(keep)[0]]
    bad = [N for N in family if not verify_inert_prime(N, spec)]
    total = int(flags.sum())
    return SieveResult(limit=limit, n_primes=total, family=family, counterexamples=bad,
                       empirical_density=len(family) / total,
                       predicted_density=float(spec.predicted_density))


def family_prime(spec: InertFamilySpec, minimum: int = 3) -> int:
    """A prime admitted by the family's congruences, at least ``minimum``.

    Picks the least allowed residue for each modulus, glues them by CRT into
    r mod M, and returns the first prime r + kM >= minimum.  This is not the
    least family prime in general, only the least one in that progression.
    """
    r, M = 0, 1
    for m, allowed in spec.residue_conditions:
        a = allowed[0]
        # solve x = r (mod M), x = a (mod m); moduli are pairwise coprime
        t = (a - r) * pow(M, -1, m) % m
        r, M = r + M * t, M * m
    N = r
    while N < minimum:
        N += M
    while not is_prime(N):
        N += M
    return N


def superlinear_witness(C: Fraction, spec: InertFamilySpec, N: int) -> bool:
    """Does every scanned order give degree > C N at the family prime N?"""
    C = Fraction(C)
    if spec.H < math.floor(6 * C) + 1:
        raise ValueError(f"family built with H={spec.H}, need H >= floor(6C)+1")
    if N < 3 or not is_prime(N):
        raise ValueError(f"{N} is not an odd prime")
    bound = spec.scan.scan_bound
    for D in range(-3, -bound - 1, -1):
        if D % 4 not in (0, 1):
            continue
        h, w = class_number(D), unit_count(D)
        if kronecker(D, N) == -1:
            degree = Fraction((N * N - 1) * h, w)
        else:
            degree = Fraction((N - 1) * h, w)
        if degree <= C * N:
            return False
    return True


@dataclass(frozen=True)
class TorsionSequencePoint:
    n: int
    p_n: int
    N_n: int
    phi_Nn: int
    d_n: int
    ratio: Decimal
    mertens_prediction: Decimal

    @property
    def exact_ratio(self) -> Fraction:
        return Fraction(self.N_n, self.d_n)


def _primes_one_mod_three(count: int) -> list[int]:
    limit = max(100, int(2.5 * count * math.log(count + 2)) + 100)
    while True:
        ps = [p for p in primes_between(7, limit) if p % 3 == 1]
        if len(ps) >= count:
            return ps[:count]
        limit *= 2


def torsion_growth_sequence(n_max: int, digits: int = 50) -> list[TorsionSequencePoint]:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    points = []
    N_n, phi = 1, 1
    log_N = mpmath.mpf(0)
    ratio = mpmath.mpf(1) / 2
    with mpmath.workdps(digits + 10), localcontext() as ctx:
        ctx.prec = digits
        for n, p in enumerate(_primes_one_mod_three(n_max), 1):
            N_n *= p
            phi *= p - 1
            log_N += mpmath.log(p)
            ratio *= mpmath.mpf(p) / (p - 1)
            prediction = EXP_MINUS_HALF_GAMMA * mpmath.sqrt(mpmath.log(log_N))
            points.append(TorsionSequencePoint(
                n=n, p_n=p, N_n=N_n, phi_Nn=phi, d_n=2 * phi,
                ratio=+Decimal(mpmath.nstr(ratio, digits + 5)),
                mertens_prediction=+Decimal(mpmath.nstr(prediction, digits + 5)),
            ))
    return points
