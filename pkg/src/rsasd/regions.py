"""Closed-form decoding regions.

All boundaries are worst-case guarantees: e counts bit errors placed in
distinct symbols and f counts bit erasures spread as evenly as possible over
the remaining symbols.  Other patterns may decode well outside the region.
Integer boundaries are computed with exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .mas import flip_or_erase_optimal

REGION_KINDS = ("finite", "infinite", "m2", "optimal")


class InapplicableError(ValueError):
    """The closed form does not hold for this code rate."""


def largest_int_below(x) -> int:
    """Largest integer strictly less than x."""
    return math.ceil(Fraction(x)) - 1


def _clamp(e: int) -> int:
    return max(e, -1)


def bec_radius(N: int, K: int, m: int) -> int:
    """Largest f such that every pattern of f bit erasures is certainly
    decodable under proportional assignment (asymptotic M).

    For K = 1 every one of the N*m bits may be erased.
    """
    if not 1 <= K <= N:
        raise ValueError("need 1 <= K <= N")
    if K == 1:
        return N * m
    R = Fraction(K, N)
    i = 1
    while True:
        lo = Fraction(1, 2**i) + (1 - Fraction(1, 2 ** (i + 1))) / N
        hi = Fraction(1, 2 ** (i - 1)) + (1 - Fraction(1, 2**i)) / N
        if lo <= R < hi:
            break
        i += 1
    return min((i + 1) * N - 2**i * (K - 1) - 1, N * m)


def bec_nondecodable_threshold(N: int, K: int) -> int:
    """Number of touched symbols beyond which proportional assignment can
    no longer certify decoding (high-rate codes only)."""
    if Fraction(K, N) < Fraction(1, 2) + Fraction(3, 4 * N):
        raise InapplicableError(f"rate {K}/{N} is below 1/2 + 3/(4N)")
    return 2 * (N - K) + 1


def qec_radius(N: int, K: int, u: int) -> int:
    """Bit-erasure radius when erasures arrive in aligned groups of u bits."""
    if u < 1:
        raise ValueError("group size must be positive")
    p = Fraction(1, 2**u)
    if Fraction(K, N) < p + (1 + p * p - p) / N:
        raise InapplicableError(f"rate {K}/{N} too low for group size {u}")
    return largest_int_below(Fraction(N - K + 1) / (1 - p))


def mixed_region_infinite(N: int, K: int, f: int) -> int:
    """Largest e with e < N - f/2 - sqrt((K-1)(N - f/2)), or -1."""
    if f < 0:
        raise ValueError("f must be nonnegative")
    A = Fraction(2 * N - f, 2)
    B = (K - 1) * A

    def ok(e):
        return A - e > 0 and (A - e) ** 2 > B

    if A <= 0:
        return -1
    e = math.floor(float(A) - math.sqrt(float(B))) + 1
    while e >= 0 and not ok(e):
        e -= 1
    while ok(e + 1):
        e += 1
    return _clamp(e)


def worst_case_score_cost(N: int, M: int, e: int, f: int) -> tuple[Fraction, Fraction]:
    """Score of the transmitted codeword and cost under the bit-erasure
    assignment, for the worst-case placement with e + f <= N."""
    S = Fraction(2 * (N - e) - f, 2) * M
    C = Fraction((2 * N - f) * M * M, 4) + Fraction(N * M, 2)
    return S, C


def _score_threshold_index(C: Fraction, K: int) -> int:
    """Largest a with a(a+1)(K-1) <= 2C."""
    k1 = K - 1
    a = int(math.isqrt(int(2 * C / k1))) if k1 else 0
    while a * (a + 1) * k1 > 2 * C:
        a -= 1
    while (a + 1) * (a + 2) * k1 <= 2 * C:
        a += 1
    return a


def mixed_region_finite(N: int, K: int, M: int, f: int) -> int:
    """Largest e certainly decodable with f bit erasures at multiplicity M
    under the bit-erasure assignment, or -1."""
    if M < 2 or M % 2:
        raise ValueError(f"M must be an even integer >= 2, got {M}")
    if f < 0:
        raise ValueError("f must be nonnegative")
    if K < 2:
        raise ValueError("need K >= 2")
    C = Fraction((N - f) * M * (M + 1), 2) + f * Fraction(M, 2) * (Fraction(M, 2) + 1)
    a = _score_threshold_index(C, K)
    bound = N - Fraction(f, 2) - (Fraction(a * (a + 1) * (K - 1), 2) + C) / (M * (a + 1))
    return _clamp(largest_int_below(bound))


def m2_region(N: int, K: int, f: int) -> int:
    """Largest e with e < (N-K+1)/2 - f/3, or -1."""
    return _clamp(largest_int_below(Fraction(N - K + 1, 2) - Fraction(f, 3)))


def nondecodable_outer(N: int, K: int, e: int, f: int) -> bool:
    """True when the worst-case (e, f) pattern provably fails under the
    bit-erasure assignment: the transmitted score cannot exceed M(K-1)."""
    return f >= 2 * (N - (K - 1) - e)


def optimal_outer_e_max(N: int, K: int, m: int, f: int) -> int:
    """Radius of the optimal flip-or-erase assignment (valid for e + f <= N)."""
    return flip_or_erase_optimal(N, K, m, f).e_max


@dataclass(frozen=True)
class DecodingRegion:
    """e_max[f] for f = 0..len-1; any larger f is outside the region."""

    kind: str
    N: int
    K: int
    m: int
    M: int | None
    e_max: tuple[int, ...]

    def e_max_at(self, f: int) -> int:
        if f < 0:
            raise ValueError("f must be nonnegative")
        return self.e_max[f] if f < len(self.e_max) else -1

    def contains(self, e: int, f: int) -> bool:
        return 0 <= e <= self.e_max_at(f)

    @property
    def f_max(self) -> int:
        live = [f for f, e in enumerate(self.e_max) if e >= 0]
        return live[-1] if live else -1

    def rows(self):
        return [(f, e) for f, e in enumerate(self.e_max) if e >= 0]


def region_boundary(kind: str, N: int, K: int, f: int, m: int = 8, M: int | None = None) -> int:
    if kind == "finite":
        if M is None:
            raise ValueError("finite region needs M")
        return mixed_region_finite(N, K, M, f)
    if kind == "infinite":
        return mixed_region_infinite(N, K, f)
    if kind == "m2":
        return m2_region(N, K, f)
    if kind == "optimal":
        return optimal_outer_e_max(N, K, m, f) if f <= N else -1
    raise ValueError(f"unknown region kind {kind!r}")


def region_table(kind: str, N: int, K: int, m: int = 8, M: int | None = None, f_ceiling: int | None = None) -> DecodingRegion:
    """Tabulate e_max(f) from f = 0 until the region is empty (or f_ceiling)."""
    if kind not in REGION_KINDS:
        raise ValueError(f"unknown region kind {kind!r}")
    limit = N * m if f_ceiling is None else f_ceiling
    table = []
    for f in range(limit + 1):
        e = region_boundary(kind, N, K, f, m, M)
        if e < 0 and f_ceiling is None:
            break
        table.append(e)
    return DecodingRegion(kind=kind, N=N, K=K, m=m, M=M, e_max=tuple(table))
