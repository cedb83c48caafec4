"""Imaginary quadratic orders and their class numbers.

Class numbers are counted as primitive reduced binary quadratic forms
``a x^2 + b x y + c y^2`` with ``b^2 - 4ac = D``.  Values are memoized in
a process-wide table that :mod:`cmtorsion.cli` can persist to disk.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from sympy import factorint

from .arith import is_prime, kronecker

CLASS_NUMBER_ONE = (-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163)


def is_discriminant(D: int) -> bool:
    return D < 0 and D % 4 in (0, 1)


def _require_discriminant(D: int) -> None:
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a negative discriminant (D < 0, D = 0,1 mod 4)")


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def is_fundamental(D: int) -> bool:
    if not is_discriminant(D):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    m = D // 4
    return m % 4 in (2, 3) and _squarefree(m)


@dataclass(frozen=True, order=True)
class ReducedForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@dataclass(frozen=True)
class OrderProfile:
    D: int
    D0: int
    f: int
    w: int
    h: int


def decompose(D: int) -> tuple[int, int]:
    """Split D into (fundamental discriminant, conductor) with D = f^2 * D0."""
    _require_discriminant(D)
    f = 1
    for p, e in factorint(-D).items():
        f *= p ** (e // 2)
    D0 = D // (f * f)
    # the squarefree kernel may need a factor 4 put back to be a discriminant
    if D0 % 4 != 1:
        f //= 2
        D0 *= 4
    assert is_fundamental(D0) and D == f * f * D0, (D, D0, f)
    return D0, f


def unit_count(D: int) -> int:
    _require_discriminant(D)
    return {-3: 6, -4: 4}.get(D, 2)


def reduced_forms(D: int) -> list[ReducedForm]:
    """All primitive reduced forms of discriminant D, sorted by (a, b, c)."""
    _require_discriminant(D)
    forms = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append(ReducedForm(a, b, c))
    forms.sort()
    return forms


_memo: dict[int, int] = {}
_memo_lock = threading.Lock()


def class_number(D: int) -> int:
    h = _memo.get(D)
    if h is None:
        h = len(reduced_forms(D))
        with _memo_lock:
            _memo[D] = h
    return h


def tabulate_class_numbers(bound: int) -> dict[int, int]:
    """Class numbers of every discriminant with |D| <= bound in one sweep.

    Walks (a, b, c) with |b| <= a <= c directly instead of looping per D,
    which is what makes scans to |D| ~ 10^4..10^5 cheap.
    """
    counts: dict[int, int] = {}
    amax = isqrt(bound // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            bb = b * b
            c = a
            while True:
                D = bb - 4 * a * c
                if -D > bound:
                    break
                if not (b < 0 and a == c) and gcd(gcd(a, b), c) == 1:
                    counts[D] = counts.get(D, 0) + 1
                c += 1
    with _memo_lock:
        for D in range(-3, -bound - 1, -1):
            if D % 4 in (0, 1):
                _memo[D] = counts.get(D, 0)
    return {D: _memo[D] for D in range(-3, -bound - 1, -1) if D % 4 in (0, 1)}


def memo_snapshot() -> dict[int, int]:
    with _memo_lock:
        return dict(_memo)


def memo_load(entries: dict[int, int]) -> None:
    with _memo_lock:
        for D, h in entries.items():
            _memo.setdefault(D, h)


def order_profile(D: int) -> OrderProfile:
    D0, f = decompose(D)
    return OrderProfile(D=D, D0=D0, f=f, w=unit_count(D), h=class_number(D))


def relative_class_number_sides(D0: int, f: int) -> tuple[Fraction, Fraction]:
    """Both sides of h(f^2 D0) * [O_K^x : O^x] = h(D0) * f * prod_{p|f} (1 - (D0/p)/p)."""
    if not is_fundamental(D0) or f < 1:
        raise ValueError(f"need fundamental D0 and f >= 1, got ({D0}, {f})")
    D = f * f * D0
    unit_index = Fraction(unit_count(D0), unit_count(D))
    lhs = class_number(D) * unit_index
    rhs = Fraction(class_number(D0) * f)
    for p in factorint(f):
        rhs *= 1 - Fraction(kronecker(D0, p), p)
    return lhs, rhs


def relative_class_number_check(D0: int, f: int) -> bool:
    lhs, rhs = relative_class_number_sides(D0, f)
    return lhs == rhs


def ray_class_degree(D0: int, N: int) -> int:
    """((N-1)/w(K)) * (N - (D0/N)), evaluated exactly and asserted integral."""
    if not is_fundamental(D0):
        raise ValueError(f"{D0} is not a fundamental discriminant")
    if N < 3 or not is_prime(N):
        raise ValueError(f"{N} is not an odd prime")
    value = Fraction(N - 1, unit_count(D0)) * (N - kronecker(D0, N))
    if value.denominator != 1:
        raise AssertionError(f"ray class degree for ({D0}, {N}) is not integral: {value}")
    return int(value)


@dataclass(frozen=True)
class ClassNumberScan:
    H: int
    scan_bound: int
    profiles: list[OrderProfile]
    # scan is exhaustive only up to scan_bound; no proof of completeness
    completeness: str = "complete-to-bound"

    @property
    def discriminants(self) -> list[int]:
        return [p.D for p in self.profiles]


def discriminants_with_class_number_at_most(H: int, scan_bound: int) -> ClassNumberScan:
    if H < 1 or scan_bound < 4:
        raise ValueError("need H >= 1 and scan_bound >= 4")
    table = tabulate_class_numbers(scan_bound)
    profiles = [order_profile(D) for D in sorted(table, reverse=True) if table[D] <= H]
    return ClassNumberScan(H=H, scan_bound=scan_bound, profiles=profiles)


def discriminants_up_to(bound: int):
    """Negative discriminants with 3 <= |D| <= bound, by increasing |D|."""
    for m in range(3, bound + 1):
        if (-m) % 4 in (0, 1):
            yield -m
