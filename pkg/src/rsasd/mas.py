"""Multiplicity assignment strategies and their asymptotic score/cost.

Besides the two matrix builders (proportional and the bit-erasure rule used
by BGMD) this module solves for the best one-parameter assignments over the
1-bit-flip BSC and the flip-or-erase channel, returning exact integer radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .asd import AsymptoticScoreCost
from .channels import TypeHistogram
from .rscode import CodeSpec, from_bits

STRATEGIES = ("pmas", "proposed", "bsc_optimal", "flip_or_erase")

# Keeps floor(pi * M) from dropping a unit when pi * M lands a hair below an integer.
_FLOOR_GUARD = 1e-9


@dataclass(frozen=True)
class MasParams:
    strategy: str
    M: float | None = None
    coefficients: tuple[float, ...] | None = None
    t: float | None = None
    t1: float | None = None
    t2: float | None = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.strategy == "proposed" and self.M is not None:
            if self.M != int(self.M) or self.M < 2 or int(self.M) % 2:
                raise ValueError(f"proposed MAS needs an even integer M >= 2, got {self.M}")
        if self.strategy == "pmas" and self.M is not None and self.M <= 0:
            raise ValueError("PMAS needs M > 0")
        for v in (self.t, self.t1, self.t2):
            if v is not None and v < 0:
                raise ValueError("multiplicity coefficients must be nonnegative")
        if self.coefficients is not None and any(c < 0 for c in self.coefficients):
            raise ValueError("multiplicity coefficients must be nonnegative")


def pmas(Pi, M: float) -> np.ndarray:
    """Proportional assignment, floor(pi * M) entrywise."""
    if M <= 0:
        raise ValueError("M must be positive")
    Pi = np.asarray(Pi, dtype=np.float64)
    return np.floor(Pi * M + _FLOOR_GUARD).astype(np.int64)


def pmas_asymptotic(Pi, codeword) -> AsymptoticScoreCost:
    """Score and cost coefficients of PMAS as M grows, for a given codeword."""
    Pi = np.asarray(Pi, dtype=np.float64)
    cw = np.asarray(codeword, dtype=np.int64)
    s = float(Pi[cw, np.arange(len(cw))].sum())
    return AsymptoticScoreCost(s=s, c=float((Pi**2).sum() / 2))


def _check_even(M) -> int:
    if M != int(M) or M < 2 or int(M) % 2:
        raise ValueError(f"M must be an even integer >= 2, got {M}")
    return int(M)


def proposed_mas(hard_bits, erased, spec: CodeSpec, M: int) -> np.ndarray:
    """M on clean symbols, M/2 on both readings of a 1-bit-erased symbol,
    nothing on symbols with two or more erased bits."""
    M = _check_even(M)
    hard = np.asarray(hard_bits, dtype=np.uint8)
    er = np.asarray(erased, dtype=bool)
    if hard.shape != (spec.n,) or er.shape != (spec.n,):
        raise ValueError(f"expected {spec.n} bits")
    base = from_bits(np.where(er, 0, hard), spec)
    per_symbol = er.reshape(spec.N, spec.m)
    counts = per_symbol.sum(axis=1)
    mm = np.zeros((spec.q, spec.N), dtype=np.int64)
    cols = np.arange(spec.N)
    clean = counts == 0
    mm[base[clean], cols[clean]] = M
    one = np.nonzero(counts == 1)[0]
    if len(one):
        bit = np.argmax(per_symbol[one], axis=1)
        mm[base[one], one] = M // 2
        mm[base[one] | (1 << bit), one] = M // 2
    return mm


def _root_exceeds(lead, half_lin, const, r: Fraction) -> bool:
    """Whether the smallest positive root x* of lead*x^2 + 2*half_lin*x - const
    satisfies x* > r, for r >= 0, const > 0 and half_lin > 0.

    The function is negative at 0, so x* > r exactly when the polynomial is
    still negative at r and r lies left of any turning point.
    """
    val = lead * r * r + 2 * half_lin * r - const
    if val >= 0:
        return False
    if lead < 0 and r >= Fraction(-half_lin) / lead:
        return False
    return True


def _root_value(lead, half_lin, const) -> float:
    if lead == 0:
        return float(Fraction(const) / (2 * half_lin))
    disc = half_lin * half_lin + lead * const
    if disc < 0:
        raise ValueError("no real root for the optimal coefficient")
    return (-float(half_lin) + math.sqrt(float(disc))) / float(lead)


def _largest_below(n_avail: int, m: int, exceeds) -> int:
    """Largest e in [0, n_avail) with root > e / (m (n_avail - e)), or -1."""
    best = -1
    lo, hi = 0, n_avail - 1
    # predicate is monotone (true then false) in e
    while lo <= hi:
        mid = (lo + hi) // 2
        if exceeds(Fraction(mid, m * (n_avail - mid))):
            best = mid
            lo = mid + 1
        else:
            hi = mid - 1
    return best


@dataclass(frozen=True)
class BscRadius:
    t: float
    e_max: int | None
    all_correctable: bool = False
    N: int | None = None

    @property
    def holds_for_bsc(self) -> bool:
        """Whether the radius also covers multi-bit errors per symbol, which
        needs t <= 1/2 and e_max <= N."""
        if self.all_correctable or self.e_max is None:
            return False
        return self.t <= 0.5 and (self.N is None or self.e_max <= self.N)


def bsc_optimal(N: int, K: int, m: int) -> BscRadius:
    """Best neighbour coefficient x0 over the 1-bit-flip BSC and the
    resulting bit-error radius.

    At low rate every error pattern is covered; then ``e_max`` is None and
    ``all_correctable`` is set.
    """
    if not 2 <= K <= N:
        raise ValueError("need 2 <= K <= N")
    k1 = K - 1
    if k1 * (1 + m) < N:
        return BscRadius(t=1.0, e_max=None, all_correctable=True, N=N)
    lead = m * (m * k1 - N)
    half_lin = m * k1
    const = N - k1
    x0 = _root_value(lead, half_lin, const)
    e_max = _largest_below(N, m, lambda r: _root_exceeds(lead, half_lin, const, r))
    return BscRadius(t=x0, e_max=e_max, N=N)


@dataclass(frozen=True)
class FlipEraseRadius:
    t1: float
    t2: float
    e_max: int


def flip_or_erase_optimal(N: int, K: int, m: int, f: int) -> FlipEraseRadius:
    """Best (flip, erase) coefficients and bit-error radius with f erased bits,
    one per symbol."""
    if not 0 <= f <= N:
        raise ValueError(f"need 0 <= f <= N, got f={f}")
    if K < 2:
        raise ValueError("need K >= 2")
    k1 = K - 1
    if f >= 2 * k1:
        return FlipEraseRadius(t1=0.0, t2=math.inf, e_max=N - f)
    if m > 1 and f > 2 * k1 + Fraction(4 * k1 - 2 * N, m - 1):
        t2 = math.sqrt((N - f) * (1 + m) / (4 * k1 - 2 * f))
        return FlipEraseRadius(t1=1.0, t2=t2, e_max=N - f)
    B2 = Fraction(N - f) / (k1 - Fraction(f, 2))
    lead = m * (m - B2)
    half_lin = Fraction(m)
    const = B2 - 1
    t1 = _root_value(lead, half_lin, const)
    t2 = math.sqrt((N - f) * (1 + m * t1 * t1) / (4 * k1 - 2 * f))
    e_max = _largest_below(N - f, m, lambda r: _root_exceeds(lead, half_lin, const, r))
    return FlipEraseRadius(t1=t1, t2=t2, e_max=e_max)


def strategy_score_cost(hist: TypeHistogram, params: MasParams, m: int | None = None) -> AsymptoticScoreCost:
    """Score and cost coefficients (units of M and M^2) for a type histogram.

    Erasure histograms (``kind='erasure'``) count erased bits per symbol.
    Error histograms count flipped bits per symbol. Mixed histograms hold
    three counts: clean symbols, 1-bit-flipped symbols, 1-bit-erased symbols.
    """
    a = np.asarray(hist.counts, dtype=np.float64)
    if m is None:
        m = len(a) - 1
    if hist.kind == "erasure":
        if params.coefficients is not None:
            coef = np.zeros(len(a))
            given = np.asarray(params.coefficients, dtype=np.float64)[: len(a)]
            coef[: len(given)] = given
        elif params.strategy == "pmas":
            coef = 2.0 ** -np.arange(len(a))
        elif params.strategy == "proposed":
            coef = np.zeros(len(a))
            coef[0] = 1.0
            if len(a) > 1:
                coef[1] = 0.5
        else:
            raise ValueError(f"{params.strategy} is not defined for erasure histograms")
        s = float(np.sum(a * coef))
        c = float(np.sum(a * 2.0 ** np.arange(len(a)) * coef**2) / 2)
        return AsymptoticScoreCost(s=s, c=c)
    if hist.kind == "error":
        if params.coefficients is not None:
            coef = np.asarray(params.coefficients, dtype=np.float64)
        elif params.strategy == "bsc_optimal":
            coef = np.array([1.0, params.t if params.t is not None else 0.0])
        else:
            raise ValueError(f"{params.strategy} is not defined for error histograms")
        full = np.zeros(len(a))
        full[: min(len(a), len(coef))] = coef[: len(a)]
        s = float(np.sum(a * full))
        neighbours = np.array([math.comb(m, i) for i in range(len(coef))], dtype=np.float64)
        c = float(a.sum() * np.sum(neighbours * coef**2) / 2)
        return AsymptoticScoreCost(s=s, c=c)
    if hist.kind == "mixed":
        if len(a) != 3:
            raise ValueError("mixed histogram needs (clean, flipped, erased) counts")
        t1 = params.t1 if params.t1 is not None else 0.0
        t2 = params.t2 if params.t2 is not None else 0.5
        clean, flipped, erased = a
        s = float(clean + flipped * t1 + erased * t2)
        c = float(((clean + flipped) * (1 + m * t1 * t1) + 2 * erased * t2 * t2) / 2)
        return AsymptoticScoreCost(s=s, c=c)
    raise ValueError(f"unknown histogram kind {hist.kind!r}")
