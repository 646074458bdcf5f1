"""Analytic frame-error bounds.

BEC: exact failure probability of the proportional-assignment predicate,
plus closed-form upper and lower bounds.  AWGN: an order-statistics upper
bound on bit-level GMD and the bounded-distance FER of BM.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize, special
from scipy.special import erfc
from scipy.stats import beta as beta_dist
from scipy.stats import binom, norm

from .channels import ebn0_to_n0
from .regions import InapplicableError, bec_nondecodable_threshold, bec_radius, region_table


class QuadratureError(ArithmeticError):
    def __init__(self, value: float, residual: float):
        self.value = value
        self.residual = residual
        super().__init__(f"quadrature did not converge: value {value:.3e}, error estimate {residual:.3e}")


@dataclass
class BoundCurve:
    points: list[tuple[float, float]]
    kind: str
    strategy: str
    code: tuple[int, int, int]
    M: int | None = None
    meta: dict = field(default_factory=dict)


def q_tail(x, N0: float):
    """P(n > x) for n ~ Normal(0, N0/2)."""
    if N0 <= 0:
        raise ValueError("N0 must be positive")
    return 0.5 * erfc(np.asarray(x, dtype=np.float64) / math.sqrt(N0))


def bit_error_probability(N0: float) -> float:
    return float(q_tail(1.0, N0))


# --- BEC -------------------------------------------------------------------


@dataclass(frozen=True)
class BecFer:
    exact: float
    upper: float
    lower: float | None


def bec_fer(N: int, K: int, m: int, eps: float) -> BecFer:
    """Failure probability over the BEC with bit-erasure probability eps.

    ``exact`` is P(sum_j 2^-B_j <= K-1) for B_j ~ Binomial(m, eps), by an
    exact convolution on the 2^-m lattice.  ``upper`` comes from the
    worst-case erasure radius and ``lower`` from the touched-symbol count;
    ``lower`` is None when the code rate is too low for it.
    """
    if not 0 <= eps <= 1:
        raise ValueError("eps must be in [0, 1]")
    if K < 2:
        raise ValueError("need K >= 2")
    unit = 1 << m
    limit = (K - 1) * unit
    pb = binom.pmf(np.arange(m + 1), m, eps)
    dist = np.zeros(limit + 1)
    dist[0] = 1.0
    for _ in range(N):
        new = np.zeros_like(dist)
        for b in range(m + 1):
            step = unit >> b
            if pb[b] == 0 or step > limit:
                continue
            new[step:] += pb[b] * dist[: limit + 1 - step]
        dist = new
    exact = float(min(1.0, dist.sum()))
    upper = float(binom.sf(bec_radius(N, K, m), N * m, eps))
    try:
        thr = bec_nondecodable_threshold(N, K)
        lower = float(binom.sf(thr, N, 1 - (1 - eps) ** m))
    except InapplicableError:
        lower = None
    return BecFer(exact=exact, upper=upper, lower=lower)


def bec_eta(erased, N: int, m: int) -> np.ndarray:
    """sum_j 2^-(erased bits in symbol j), for one or many frames."""
    er = np.asarray(erased, dtype=bool)
    per_symbol = er.reshape(*er.shape[:-1], N, m).sum(axis=-1)
    return np.sum(2.0 ** -per_symbol, axis=-1)


# --- order statistics ------------------------------------------------------


def _sigma(N0: float) -> float:
    return math.sqrt(N0 / 2)


def error_magnitude_pdf(x, N0: float):
    """Density of |r| for a bit received in error (r <= 0)."""
    x = np.asarray(x, dtype=np.float64)
    s = _sigma(N0)
    return np.where(x >= 0, norm.pdf(x + 1, scale=s) / bit_error_probability(N0), 0.0)


def correct_magnitude_pdf(x, N0: float):
    x = np.asarray(x, dtype=np.float64)
    s = _sigma(N0)
    return np.where(x >= 0, norm.pdf(x - 1, scale=s) / (1 - bit_error_probability(N0)), 0.0)


def error_magnitude_sf(x, N0: float):
    """P(|r| >= x | bit in error) = Q(x+1)/Q(1)."""
    x = np.asarray(x, dtype=np.float64)
    s = _sigma(N0)
    logv = norm.logsf(x + 1, scale=s) - norm.logsf(1, scale=s)
    return np.where(x <= 0, 1.0, np.exp(logv))


def correct_magnitude_cdf(x, N0: float):
    x = np.asarray(x, dtype=np.float64)
    s = _sigma(N0)
    q1 = bit_error_probability(N0)
    return np.where(x <= 0, 0.0, (norm.cdf(x - 1, scale=s) - q1) / (1 - q1))


def _correct_magnitude_ppf(u, N0: float):
    s = _sigma(N0)
    q1 = bit_error_probability(N0)
    return 1 + s * norm.isf((1 - np.asarray(u)) * (1 - q1))


def order_stat_pdf(x, count: int, rank: int, N0: float, errors: bool = True):
    """Density of the rank-th largest magnitude among ``count`` error bits
    (or correct bits when ``errors`` is False)."""
    if not 1 <= rank <= count:
        raise ValueError("need 1 <= rank <= count")
    if errors:
        pdf = error_magnitude_pdf(x, N0)
        cdf = 1 - error_magnitude_sf(x, N0)
    else:
        pdf = correct_magnitude_pdf(x, N0)
        cdf = correct_magnitude_cdf(x, N0)
    return pdf * beta_dist.pdf(np.clip(cdf, 0, 1), count - rank + 1, rank)


def order_stat_event(n: int, i: int, j: int, l: int, N0: float, rtol: float = 1e-10) -> float:
    """P(beta_j(i) >= gamma_l(n-i)): the j-th largest of i error magnitudes is
    at least the l-th largest of n-i correct magnitudes.

    Integrated over u = F_c(x), the correct-magnitude CDF, so that the
    outer density becomes a beta density.
    """
    if not (1 <= j <= i <= n and 1 <= l <= n - i):
        raise ValueError(f"invalid order-statistic indices n={n}, i={i}, j={j}, l={l}")
    a, b = n - i - l + 1, l
    sig = _sigma(N0)
    q1 = bit_error_probability(N0)
    log_q1 = special.log_ndtr(-1 / sig)
    log_norm = -special.betaln(a, b)

    def integrand(u):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        # x = F_c^{-1}(u), then P(at least j error magnitudes >= x)
        x = 1 - sig * special.ndtri((1 - u) * (1 - q1))
        p = math.exp(special.log_ndtr(-(x + 1) / sig) - log_q1) if x > 0 else 1.0
        dens = math.exp(log_norm + (a - 1) * math.log(u) + (b - 1) * math.log1p(-u))
        return dens * special.bdtrc(j - 1, i, min(p, 1.0))

    probs = [1e-14, 1e-10, 1e-6, 1e-3, 0.05, 0.5, 0.95, 1 - 1e-3, 1 - 1e-6, 1 - 1e-10]
    knots = np.unique(np.concatenate([[0.0], beta_dist.ppf(probs, a, b), [1.0]]))
    total = 0.0
    err = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        if hi <= lo:
            continue
        # convergence is judged below from the summed error estimate
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            v, e = integrate.quad(integrand, lo, hi, epsabs=1e-40, epsrel=rtol, limit=200)
        total += v
        err += e
    if err > max(1e-6 * abs(total), 1e-30):
        raise QuadratureError(total, err)
    return float(min(max(total, 0.0), 1.0))


def _event_probability(n: int, i: int, e: int, f: int, N0: float) -> float:
    """P(at least e+1 of the i error bits fall among the n-f most reliable)."""
    if i <= e:
        return 0.0
    if i > e + f:
        return 1.0
    return order_stat_event(n, i, e + 1, n - e - f, N0)


@dataclass(frozen=True)
class BgmdBound:
    value: float
    best_f: dict
    e_max: int
    f_max: int


def bgmd_awgn_upper(N: int, K: int, m: int, M: int, N0: float, with_binomial: bool = True) -> BgmdBound:
    """Order-statistics upper bound on the list-failure probability of
    bit-level GMD with multiplicity M over BPSK/AWGN.

    For i bit errors the decoder is bounded by the best single (e, f) pair of
    the decoding region.  ``with_binomial=False`` drops the C(n, i) factor
    on the error-count probability, for comparison only.
    """
    n = N * m
    pb = bit_error_probability(N0)
    region = region_table("finite", N, K, m=m, M=M)
    f_max = region.f_max
    e_max = region.e_max[0]
    total = 0.0
    best_f = {}
    for i in range(e_max + 1, f_max + 1):
        if with_binomial:
            w = binom.pmf(i, n, pb)
        else:
            w = math.exp(i * math.log(pb) + (n - i) * math.log1p(-pb))
        if w == 0:
            continue
        best, arg = 1.0, None
        for f, e in enumerate(region.e_max):
            if e < 0:
                continue
            p = _event_probability(n, i, e, f, N0)
            if p < best:
                best, arg = p, f
                if best == 0.0:
                    break
        best_f[i] = arg
        total += w * best
    if with_binomial:
        tail = binom.sf(f_max, n, pb)
    else:
        ks = np.arange(f_max + 1, n + 1)
        tail = float(np.exp(ks * math.log(pb) + (n - ks) * math.log1p(-pb)).sum())
    return BgmdBound(value=float(min(1.0, total + tail)), best_f=best_f, e_max=e_max, f_max=f_max)


def bm_awgn_fer(N: int, K: int, m: int, N0: float) -> float:
    """FER of a t = floor((N-K)/2) bounded-distance decoder on hard decisions."""
    pb = bit_error_probability(N0)
    ps = -math.expm1(m * math.log1p(-pb))
    return float(binom.sf((N - K) // 2, N, ps))


def crossing_snr(fer_of_snr, target: float, lo: float, hi: float) -> float:
    """Eb/N0 (dB) where a decreasing FER curve crosses ``target``."""
    g = lambda snr: math.log(max(fer_of_snr(snr), 1e-300)) - math.log(target)
    if g(lo) < 0 or g(hi) > 0:
        raise ValueError(f"target {target} not bracketed by [{lo}, {hi}] dB")
    return float(optimize.brentq(g, lo, hi, xtol=1e-4))


def snr_to_n0(snr_db: float, N: int, K: int) -> float:
    return ebn0_to_n0(snr_db, K / N)
