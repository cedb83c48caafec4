"""Cartan subalgebras of 2x2 matrices mod N coming from an imaginary quadratic order.

E[N] is modelled as (Z/N)^2 with the order acting through the companion
matrix of its generator; no elliptic curve is ever built.  Brute-force
group computations (orbits, normalizers) run over all of GL_2(F_N) and are
capped at N <= 31.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .arith import is_prime, kronecker
from .quadorders import is_discriminant

MAX_ENUMERATION_N = 31


class SplitType(enum.Enum):
    SPLIT = "Split"
    INERT = "Inert"
    RAMIFIED = "Ramified"

    def __str__(self) -> str:
        return self.value


def _require_odd_prime(N: int) -> None:
    if N < 3 or not is_prime(N):
        raise ValueError(f"{N} is not an odd prime")


def split_type(D: int, N: int) -> SplitType:
    s = kronecker(D, N)
    if s == 1:
        return SplitType.SPLIT
    if s == -1:
        return SplitType.INERT
    return SplitType.RAMIFIED


# Matrices are tuples (a, b, c, d) for [[a, b], [c, d]], entries reduced mod N.
Mat = tuple[int, int, int, int]


def mat_mul(x: Mat, y: Mat, N: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % N, (a * f + b * h) % N, (c * e + d * g) % N, (c * f + d * h) % N)


def mat_det(x: Mat, N: int) -> int:
    return (x[0] * x[3] - x[1] * x[2]) % N


def mat_inv(x: Mat, N: int) -> Mat:
    det = mat_det(x, N)
    if det == 0:
        raise ZeroDivisionError("singular matrix")
    t = pow(det, -1, N)
    a, b, c, d = x
    return (d * t % N, -b * t % N, -c * t % N, a * t % N)


def mat_pow(x: Mat, e: int, N: int) -> Mat:
    result: Mat = (1, 0, 0, 1)
    while e:
        if e & 1:
            result = mat_mul(result, x, N)
        x = mat_mul(x, x, N)
        e >>= 1
    return result


def mat_apply(x: Mat, v: tuple[int, int], N: int) -> tuple[int, int]:
    return ((x[0] * v[0] + x[1] * v[1]) % N, (x[2] * v[0] + x[3] * v[1]) % N)


def conjugate(g: Mat, x: Mat, N: int) -> Mat:
    return mat_mul(mat_mul(g, x, N), mat_inv(g, N), N)


@dataclass(frozen=True)
class OrbitReport:
    orbit_sizes: tuple[int, ...]
    unit_group_order: int
    normalizer_order: int
    normalizer_index: int
    representatives: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class CartanContext:
    """The algebra {a*I + b*T} where T is the image of the order generator."""

    N: int
    D: int
    generator: Mat
    type: SplitType

    def element(self, a: int, b: int) -> Mat:
        _, t01, t10, t11 = self.generator
        N = self.N
        return (a % N, b * t01 % N, b * t10 % N, (a + b * t11) % N)

    def coordinates(self, x: Mat) -> tuple[int, int] | None:
        """(a, b) with x = a*I + b*T, or None when x lies outside the algebra."""
        a, b = x[0], x[2]
        return (a, b) if self.element(a, b) == x else None

    def contains(self, x: Mat) -> bool:
        return self.coordinates(x) is not None

    @cached_property
    def elements(self) -> list[Mat]:
        N = self.N
        return [self.element(a, b) for a in range(N) for b in range(N)]

    @cached_property
    def units(self) -> list[Mat]:
        return [x for x in self.elements if mat_det(x, self.N) != 0]

    def conjugation(self) -> Mat:
        """The image of the order's complex conjugation, tau -> D - tau, on the generator."""
        return self.element(self.D, -1)


def build_cartan(D: int, N: int) -> CartanContext:
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a discriminant")
    _require_odd_prime(N)
    # tau = (D + sqrt D)/2 has minimal polynomial t^2 - D t + (D^2 - D)/4
    norm = (D * D - D) // 4
    T: Mat = (0, -norm % N, 1, D % N)
    ctx = CartanContext(N=N, D=D, generator=T, type=split_type(D, N))
    # characteristic polynomial check: T^2 - D T + norm I == 0
    T2 = mat_mul(T, T, N)
    zero = tuple((T2[i] - D * T[i] + (norm if i in (0, 3) else 0)) % N for i in range(4))
    assert zero == (0, 0, 0, 0)
    if len(set(ctx.elements)) != N * N:
        raise AssertionError(f"algebra for ({D}, {N}) does not have {N * N} elements")
    return ctx


def eigenvalues(ctx: CartanContext) -> list[int]:
    """Roots in F_N of the generator's characteristic polynomial (with multiplicity)."""
    N, D = ctx.N, ctx.D
    norm = (D * D - D) // 4
    roots = []
    for r in range(N):
        if (r * r - D * r + norm) % N == 0:
            roots.append(r)
    if len(roots) == 1:
        roots *= 2
    return roots


def unit_group_order(ctx: CartanContext) -> int:
    return len(ctx.units)


def expected_unit_group_order(kind: SplitType, N: int) -> int:
    return {
        SplitType.SPLIT: (N - 1) ** 2,
        SplitType.INERT: N * N - 1,
        SplitType.RAMIFIED: N * N - N,
    }[kind]


def _orbits_under(gens: list[Mat], N: int) -> list[list[tuple[int, int]]]:
    """Orbits on nonzero vectors of the group generated by ``gens``, each
    sorted, listed by lexicographically least member."""
    seen: set[tuple[int, int]] = set()
    orbits = []
    for v0 in ((x, y) for x in range(N) for y in range(N)):
        if v0 == (0, 0) or v0 in seen:
            continue
        orbit = {v0}
        frontier = [v0]
        while frontier:
            v = frontier.pop()
            for g in gens:
                u = mat_apply(g, v, N)
                if u not in orbit:
                    orbit.add(u)
                    frontier.append(u)
        seen |= orbit
        orbits.append(sorted(orbit))
    return orbits


def unit_orbits(ctx: CartanContext) -> list[list[tuple[int, int]]]:
    return _orbits_under(ctx.units, ctx.N)


def _all_gl2(N: int) -> np.ndarray:
    grid = np.indices((N, N, N, N)).reshape(4, -1).T
    det = (grid[:, 0] * grid[:, 3] - grid[:, 1] * grid[:, 2]) % N
    return grid[det != 0]


def normalizer_elements(ctx: CartanContext) -> list[Mat]:
    """All g in GL_2(F_N) with g C g^-1 = C, by exhaustive search."""
    N = ctx.N
    if N > MAX_ENUMERATION_N:
        raise ValueError(f"N={N} exceeds the enumeration cap {MAX_ENUMERATION_N}")
    g = _all_gl2(N)
    a, b, c, d = (g[:, i] for i in range(4))
    det = (a * d - b * c) % N
    inv_det = np.array([pow(int(x), -1, N) for x in range(1, N)])[det - 1]
    _, t01, t10, t11 = ctx.generator
    # M = g T adj(g), then scaled by 1/det
    gt00 = b * t10
    gt01 = a * t01 + b * t11
    gt10 = d * t10
    gt11 = c * t01 + d * t11
    m00 = (gt00 * d - gt01 * c) * inv_det % N
    m01 = (-gt00 * b + gt01 * a) * inv_det % N
    m10 = (gt10 * d - gt11 * c) * inv_det % N
    m11 = (-gt10 * b + gt11 * a) * inv_det % N
    # M lies in span(I, T) iff M = m00*I + m10*T
    inside = (m01 == m10 * t01 % N) & (m11 == (m00 + m10 * t11) % N)
    return [tuple(int(v) for v in row) for row in g[inside]]


def normalizer(ctx: CartanContext) -> tuple[int, int]:
    order = len(normalizer_elements(ctx))
    units = unit_group_order(ctx)
    if order % units:
        raise AssertionError("normalizer order not divisible by the unit group order")
    return order, order // units


def orbits(ctx: CartanContext, with_normalizer: bool = True) -> OrbitReport:
    orbs = unit_orbits(ctx)
    units = unit_group_order(ctx)
    norm_order = norm_index = 0
    if with_normalizer and ctx.N <= MAX_ENUMERATION_N:
        norm_order, norm_index = normalizer(ctx)
    sizes = tuple(sorted(len(o) for o in orbs))
    assert sum(sizes) == ctx.N ** 2 - 1
    return OrbitReport(
        orbit_sizes=sizes,
        unit_group_order=units,
        normalizer_order=norm_order,
        normalizer_index=norm_index,
        representatives=tuple(o[0] for o in orbs),
    )


def expected_orbit_sizes(kind: SplitType, N: int) -> tuple[int, ...]:
    return {
        SplitType.SPLIT: tuple(sorted((N - 1, N - 1, (N - 1) ** 2))),
        SplitType.INERT: (N * N - 1,),
        SplitType.RAMIFIED: tuple(sorted((N - 1, N * N - N))),
    }[kind]


def normalizer_merges_eigen_orbits(ctx: CartanContext) -> bool:
    if ctx.type is not SplitType.SPLIT:
        raise ValueError("eigen-orbit fusion only makes sense in the split case")
    small = [o for o in unit_orbits(ctx) if len(o) == ctx.N - 1]
    assert len(small) == 2
    fused = _orbits_under(ctx.units + normalizer_elements(ctx), ctx.N)
    target = set(small[0]) | set(small[1])
    return any(set(o) == target for o in fused)


def _eigenbasis(ctx: CartanContext) -> Mat:
    """Change of basis whose columns are eigenvectors of T (split case)."""
    N = ctx.N
    t11 = ctx.generator[3]
    # for T = [[0, t01], [1, t11]], (lam - t11, 1) spans the lam-eigenspace
    (l1, l2) = sorted(set(eigenvalues(ctx)))
    return ((l1 - t11) % N, (l2 - t11) % N, 1, 1)


def _jordan_basis(ctx: CartanContext) -> Mat:
    """Basis (e1, e2) with e1 spanning the kernel of the nilpotent part and e2 mapped onto e1."""
    N = ctx.N
    lam = eigenvalues(ctx)[0]
    t = ctx.generator
    nil = ((t[0] - lam) % N, t[1], t[2], (t[3] - lam) % N)
    e2 = next(v for v in ((1, 0), (0, 1)) if mat_apply(nil, v, N) != (0, 0))
    e1 = mat_apply(nil, e2, N)
    return (e1[0], e2[0], e1[1], e2[1])


def _involution_candidates(ctx: CartanContext) -> list[Mat]:
    """Normalizer elements outside C^x that square to a scalar."""
    N = ctx.N
    out = []
    for g in normalizer_elements(ctx):
        if ctx.contains(g):
            continue
        g2 = mat_mul(g, g, N)
        if g2[1] == 0 and g2[2] == 0 and g2[0] == g2[3]:
            out.append(g)
    return out


def conjugation_action_check(ctx: CartanContext) -> bool:
    """Is the order's conjugation realised by an involution of the normalizer?

    Split: in an eigenbasis the map swaps the two diagonal entries.
    Inert: the map is Frobenius x -> x^N on the field of N^2 elements.
    Ramified: in a Jordan basis the map sends [[a, b], [0, a]] to [[a, -b], [0, a]].
    """
    N = ctx.N
    expected_image = ctx.conjugation()
    for g in _involution_candidates(ctx):
        if conjugate(g, ctx.generator, N) != expected_image:
            continue
        if ctx.type is SplitType.SPLIT:
            P = _eigenbasis(ctx)
            Pi = mat_inv(P, N)
            ok = all(
                _swap_diag(mat_mul(mat_mul(Pi, x, N), P, N))
                == mat_mul(mat_mul(Pi, conjugate(g, x, N), N), P, N)
                for x in ctx.elements
            )
        elif ctx.type is SplitType.INERT:
            ok = all(conjugate(g, x, N) == mat_pow(x, N, N) for x in ctx.elements)
        else:
            P = _jordan_basis(ctx)
            Pi = mat_inv(P, N)
            ok = True
            for x in ctx.elements:
                y = mat_mul(mat_mul(Pi, x, N), P, N)
                z = mat_mul(mat_mul(Pi, conjugate(g, x, N), N), P, N)
                if y[2] or y[0] != y[3] or z != (y[0], -y[1] % N, 0, y[3]):
                    ok = False
                    break
        if ok:
            return True
    return False


def _swap_diag(x: Mat) -> Mat:
    assert x[1] == 0 and x[2] == 0
    return (x[3], 0, 0, x[0])


def find_conjugator(ctx1: CartanContext, ctx2: CartanContext) -> Mat | None:
    """Some g in GL_2 with g C1 g^-1 = C2, or None."""
    if ctx1.N != ctx2.N:
        raise ValueError("contexts live at different N")
    N = ctx1.N
    for row in _all_gl2(N):
        g = tuple(int(v) for v in row)
        if ctx2.contains(conjugate(g, ctx1.generator, N)):
            return g
    return None


def torsion_field_degree_bound(D: int, N: int) -> int:
    _require_odd_prime(N)
    return 2 * expected_unit_group_order(split_type(D, N), N)


def point_degree_divisor(D: int, N: int, field_contains_sqrtD: bool, I: int) -> Fraction:
    """The number that must divide [F(P):F] for a point P of order N, given
    that the Galois image has index I in C_N^x.  Divisibility is in the
    rational sense: p | q iff q/p is an integer."""
    if I < 1:
        raise ValueError("index I must be >= 1")
    kind = split_type(D, N)
    if kind is SplitType.SPLIT:
        top = N - 1 if field_contains_sqrtD else 2
    elif kind is SplitType.INERT:
        top = N * N - 1
    else:
        top = N - 1
    return Fraction(top, I)


def root_of_unity(w: int, p: int) -> int:
    """Least residue of exact multiplicative order w mod the prime p."""
    if (p - 1) % w:
        raise ValueError(f"no element of order {w} mod {p}")
    for z in range(2, p):
        if pow(z, w, p) == 1 and all(pow(z, w // q, p) != 1 for q in _prime_divisors(w)):
            return z
    if w == 1:
        return 1
    raise ValueError(f"no element of order {w} mod {p}")


def _prime_divisors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def dft_square_check(w: int, p: int) -> bool:
    """Check A^2 = w * P mod p for the w x w DFT matrix A[j][k] = zeta^(jk),
    where P fixes index 0 and sends i to w - i."""
    if w not in (2, 4, 6):
        raise ValueError(f"w must be 2, 4 or 6, got {w}")
    if not is_prime(p) or (p - 1) % w:
        raise ValueError(f"need a prime p = 1 mod {w}, got {p}")
    zeta = root_of_unity(w, p)
    A = [[pow(zeta, j * k, p) for k in range(w)] for j in range(w)]
    A2 = [[sum(A[j][m] * A[m][k] for m in range(w)) % p for k in range(w)] for j in range(w)]
    wP = [[w % p if (j + k) % w == 0 else 0 for k in range(w)] for j in range(w)]
    return A2 == wP


def representative_discriminants(N: int, pool_bound: int = 400) -> dict[SplitType, int]:
    """Smallest |D| of each split type at N, searching discriminants up to pool_bound."""
    _require_odd_prime(N)
    reps: dict[SplitType, int] = {}
    for m in range(3, pool_bound + 1):
        D = -m
        if D % 4 not in (0, 1):
            continue
        reps.setdefault(split_type(D, N), D)
        if len(reps) == 3:
            break
    return reps


def orbit_census(ctx: CartanContext) -> Counter:
    return Counter(len(o) for o in unit_orbits(ctx))
