"""Degree formulas and bounds for CM points of prime order on X_1(N).

The least degree of an O(D)-CM point on X_1(N) is taken to be

* split:    2 (N-1) h(D) / w(D)
* inert:    (N^2-1) h(D) / w(D)
* ramified: (N-1) h(D) / w(D)

and d_CM(N) is the minimum over every discriminant up to a scan bound.
These formulas are known to be exact only for N beyond an ineffective
N_0(D); the embedded regression table is what vouches for N >= 5.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .arith import euler_phi, is_prime
from .cartan import SplitType, split_type
from .quadorders import (
    class_number,
    decompose,
    discriminants_up_to,
    is_fundamental,
    tabulate_class_numbers,
    unit_count,
)

# Least CM degree on X_1(N) and the discriminants attaining it, N <= 79.
TABLE1: dict[int, tuple[int, tuple[int, ...]]] = {
    2: (1, (-3, -4, -7, -8, -12, -16, -28)),
    3: (1, (-3, -12, -27)),
    5: (2, (-4,)),
    7: (2, (-3,)),
    11: (5, (-11,)),
    13: (4, (-3,)),
    17: (8, (-4,)),
    19: (6, (-3,)),
    23: (22, (-7, -11, -19, -28, -43, -67)),
    29: (14, (-4,)),
    31: (10, (-3,)),
    37: (12, (-3,)),
    41: (20, (-4,)),
    43: (14, (-3,)),
    47: (46, (-11, -19, -43, -67, -163)),
    53: (26, (-4,)),
    59: (58, (-8, -11, -43, -67)),
    61: (20, (-3,)),
    67: (22, (-3,)),
    71: (70, (-7, -11, -28, -67, -163)),
    73: (24, (-3,)),
    79: (26, (-3,)),
}

SOURCE_TAGS = {
    SplitType.SPLIT: "Thm4-split",
    SplitType.INERT: "Thm2-inert",
    SplitType.RAMIFIED: "Thm2-ramified",
}


def _require_prime(N: int, least: int) -> None:
    if N < least or not is_prime(N):
        raise ValueError(f"N={N} must be a prime >= {least}")


def _integral(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise AssertionError(f"{what} is not integral: {value}")
    return int(value)


def spy_min_degree(e: int, w: int) -> int:
    """Least d with phi(e) <= w d."""
    if e < 2:
        raise ValueError("e must be >= 2")
    if w not in (2, 4, 6):
        raise ValueError(f"w must be 2, 4 or 6, got {w}")
    return -(-euler_phi(e) // w)


def newthm_divisor(D0: int, N: int, delta: int) -> int:
    """Divisor of [F:Q] for an O_K-CM curve over F with a point of order N.

    ``delta`` is 1 when F contains K and 2 otherwise; it is ignored in the
    inert case.
    """
    if not is_fundamental(D0):
        raise ValueError(f"{D0} is not a fundamental discriminant")
    _require_prime(N, 3)
    if delta not in (1, 2):
        raise ValueError("delta must be 1 or 2")
    h, w = class_number(D0), unit_count(D0)
    kind = split_type(D0, N)
    if kind is SplitType.SPLIT:
        value = Fraction((N - 1) * delta * h, w)
    elif kind is SplitType.RAMIFIED:
        value = Fraction((N - 1) * (3 - delta) * h, w)
    else:
        value = Fraction((N * N - 1) * h, w)
    return _integral(value, f"divisor for ({D0}, {N}, delta={delta})")


@dataclass(frozen=True)
class DegreeCandidate:
    D: int
    N: int
    type: SplitType
    degree: int
    source: str


def _candidate(D: int, N: int, h: int) -> DegreeCandidate:
    w = unit_count(D)
    kind = split_type(D, N)
    if kind is SplitType.SPLIT:
        value = Fraction(2 * (N - 1) * h, w)
    elif kind is SplitType.INERT:
        value = Fraction((N * N - 1) * h, w)
    else:
        value = Fraction((N - 1) * h, w)
    degree = _integral(value, f"degree for ({D}, {N})")
    return DegreeCandidate(D=D, N=N, type=kind, degree=degree, source=SOURCE_TAGS[kind])


def formula_degree(D: int, N: int) -> DegreeCandidate:
    _require_prime(N, 5)
    return _candidate(D, N, class_number(D))


@dataclass(frozen=True)
class CmDegreeResult:
    N: int
    d_cm: int
    attaining: tuple[int, ...]
    scan_bound: int
    completeness: str = "complete-to-bound"


def default_scan_bound(N: int) -> int:
    return 4 * max(163, N)


def least_cm_degree(N: int, scan_bound: int | None = None) -> CmDegreeResult:
    _require_prime(N, 5)
    if scan_bound is None:
        scan_bound = default_scan_bound(N)
    tabulate_class_numbers(scan_bound)
    best = None
    attaining: list[int] = []
    for D in discriminants_up_to(scan_bound):
        d = _candidate(D, N, class_number(D)).degree
        if best is None or d < best:
            best, attaining = d, [D]
        elif d == best:
            attaining.append(D)
    assert best is not None
    if 3 * best < N - 1:
        raise AssertionError(f"d_CM({N}) = {best} is below (N-1)/3")
    return CmDegreeResult(N=N, d_cm=best, attaining=tuple(sorted(attaining, reverse=True)),
                          scan_bound=scan_bound)


def j_zero_minimum(N: int) -> int:
    _require_prime(N, 7)
    if N % 3 != 1:
        raise ValueError(f"N={N} is not 1 mod 3")
    d = (N - 1) // 3
    if formula_degree(-3, N).degree != d:
        raise AssertionError(f"j = 0 degree mismatch at N={N}")
    return d


def ramified_conductor_bound(N: int) -> int:
    """ceil((N-1)^2 / 24): lower bound on [F:K] when N divides the conductor."""
    _require_prime(N, 5)
    return ceil(Fraction((N - 1) ** 2, 24))


@dataclass
class Table1Row:
    N: int
    expected_d: int
    expected_D: tuple[int, ...]
    computed_d: int | None = None
    computed_D: tuple[int, ...] = ()
    status: str = "out-of-model"

    @property
    def matches(self) -> bool:
        return self.status == "match"


@dataclass
class Table1Report:
    scan_bound: int
    rows: list[Table1Row] = field(default_factory=list)

    @property
    def mismatches(self) -> list[Table1Row]:
        return [r for r in self.rows if r.status == "mismatch"]


def table1_reproduce(scan_bound: int = 700) -> Table1Report:
    if scan_bound < 200:
        raise ValueError("scan_bound must be >= 200")
    report = Table1Report(scan_bound=scan_bound)
    for N, (d, Ds) in sorted(TABLE1.items()):
        row = Table1Row(N=N, expected_d=d, expected_D=Ds)
        if N >= 5:
            res = least_cm_degree(N, max(scan_bound, default_scan_bound(N)))
            row.computed_d, row.computed_D = res.d_cm, res.attaining
            row.status = "match" if (res.d_cm, res.attaining) == (d, Ds) else "mismatch"
        report.rows.append(row)
    return report


def fundamental_part(D: int) -> int:
    return decompose(D)[0]
