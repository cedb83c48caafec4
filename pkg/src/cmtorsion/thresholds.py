"""Gonality-derived degree thresholds for X_1(N) and the CM crossover scan."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .arith import is_prime, primes_between
from .degrees import least_cm_degree

# Preliminary unconditional crossover from an external computation; quoted, never asserted.
REPORTED_CROSSOVER = 5_500_000

UNCONDITIONAL_GONALITY = Fraction(7, 1600)
CONDITIONAL_GONALITY = Fraction(1, 192)


def _require(N: int) -> None:
    if N <= 3 or not is_prime(N):
        raise ValueError(f"N={N} must be a prime > 3")


def psl2_index(N: int) -> int:
    """Index of Gamma_1(N) in PSL_2(Z) for prime N."""
    _require(N)
    return (N * N - 1) // 2


def gonality_bounds(N: int) -> tuple[Fraction, Fraction]:
    """Lower bounds on the complex gonality of X_1(N): (unconditional, Selberg-conditional)."""
    _require(N)
    return UNCONDITIONAL_GONALITY * (N * N - 1), CONDITIONAL_GONALITY * (N * N - 1)


def finite_degree_threshold(N: int, conditional: bool = False) -> int:
    """Points of degree strictly below this value are finite in number."""
    uncond, cond = gonality_bounds(N)
    return ceil((cond if conditional else uncond) / 2)


def infinite_degree_bound(N: int) -> int:
    """floor((N^2 - 12N + 11)/12), clipped at 0: infinitely many points of degree at most this."""
    _require(N)
    return max(0, floor(Fraction(N * N - 12 * N + 11, 12)))


@dataclass(frozen=True)
class ThresholdReport:
    N: int
    index: int
    gonality_lower_unconditional: Fraction
    gonality_lower_conditional: Fraction
    finite_threshold_unconditional: int
    finite_threshold_conditional: int
    infinite_bound: int
    d_cm: int
    verdict: str


def verdict(d_cm: int, threshold: int) -> str:
    if d_cm < threshold:
        return "cm-below-threshold"
    if d_cm > threshold:
        return "cm-above-threshold"
    return "indeterminate"


def threshold_report(N: int, conditional: bool = False, scan_bound: int | None = None,
                     d_cm: int | None = None) -> ThresholdReport:
    uncond, cond = gonality_bounds(N)
    fu = finite_degree_threshold(N, False)
    fc = finite_degree_threshold(N, True)
    if d_cm is None:
        d_cm = least_cm_degree(N, scan_bound).d_cm
    return ThresholdReport(
        N=N,
        index=psl2_index(N),
        gonality_lower_unconditional=uncond,
        gonality_lower_conditional=cond,
        finite_threshold_unconditional=fu,
        finite_threshold_conditional=fc,
        infinite_bound=infinite_degree_bound(N),
        d_cm=d_cm,
        verdict=verdict(d_cm, fc if conditional else fu),
    )


@dataclass(frozen=True)
class CrossoverScan:
    reports: list[ThresholdReport]
    conditional: bool
    # largest N in the window whose least CM degree still exceeds the threshold
    last_cm_above: int | None
    reported_crossover: int = REPORTED_CROSSOVER


def crossover_scan(N_max: int, scan_bound: int | None = None, conditional: bool = False,
                   N_min: int = 5) -> CrossoverScan:
    if N_max < 5:
        raise ValueError("N_max must be >= 5")
    reports = []
    for N in primes_between(max(5, N_min), N_max):
        bound = None if scan_bound is None else max(scan_bound, 4 * N)
        reports.append(threshold_report(N, conditional, bound))
    above = [r.N for r in reports if r.verdict == "cm-above-threshold"]
    return CrossoverScan(reports=reports, conditional=conditional,
                         last_cm_above=above[-1] if above else None)
