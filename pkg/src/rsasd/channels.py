"""Channel models, worst-case patterns and the symbol reliability matrix.

Every observation is carried as per-bit LLRs, L = log P(c=0|y) / P(c=1|y).
A known bit is +/-inf, an erased bit is exactly 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .rscode import CodeSpec, binary_image, encode


@dataclass
class SoftObservation:
    llr: np.ndarray
    kind: str = "awgn"
    param: float | None = None

    def __post_init__(self):
        self.llr = np.asarray(self.llr, dtype=np.float64)
        if np.any(np.isnan(self.llr)):
            raise ValueError("LLRs must not be NaN")

    def __len__(self) -> int:
        return len(self.llr)

    def hard_bits(self) -> np.ndarray:
        """Bitwise hard decision: 0 when L > 0, else 1."""
        return (self.llr <= 0).astype(np.uint8)

    def erased(self) -> np.ndarray:
        return self.llr == 0

    @classmethod
    def from_ternary(cls, bits, erased, kind: str = "mixed", magnitude: float = np.inf, param=None):
        bits = np.asarray(bits, dtype=np.uint8)
        llr = np.where(bits == 0, magnitude, -magnitude).astype(np.float64)
        llr[np.asarray(erased, dtype=bool)] = 0.0
        return cls(llr=llr, kind=kind, param=param)


@dataclass(frozen=True)
class TypeHistogram:
    """counts[i] = number of symbols of type i (erased bits, or bit errors)."""

    counts: np.ndarray
    kind: str = "erasure"

    @property
    def N(self) -> int:
        return int(self.counts.sum())

    @property
    def eta(self) -> float:
        return float(np.sum(self.counts * 2.0 ** -np.arange(len(self.counts))))


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial ``index``: Philox keyed by (index, seed)."""
    key = ((index & 0xFFFFFFFFFFFFFFFF) << 64) | (seed & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.Philox(key=key))


def ebn0_to_n0(snr_db: float, rate: float) -> float:
    """N0 for unit-energy BPSK at the given Eb/N0 in dB."""
    return 1.0 / (float(rate) * 10.0 ** (snr_db / 10.0))


def _as_bits(bits) -> np.ndarray:
    return np.asarray(bits, dtype=np.uint8)


def bec_transmit(bits, eps: float, rng: np.random.Generator) -> SoftObservation:
    bits = _as_bits(bits)
    erased = rng.random(bits.shape) < eps
    return SoftObservation.from_ternary(bits, erased, kind="bec", param=eps)


def bsc_transmit(bits, p: float, rng: np.random.Generator) -> SoftObservation:
    bits = _as_bits(bits)
    rx = bits ^ (rng.random(bits.shape) < p)
    mag = np.inf if p == 0 else np.log((1 - p) / p)
    llr = np.where(rx == 0, mag, -mag).astype(np.float64)
    return SoftObservation(llr=llr, kind="bsc", param=p)


def qec_transmit(bits, u: int, eps: float, rng: np.random.Generator, m: int | None = None) -> SoftObservation:
    """2^u-ary erasure channel: consecutive u-bit groups are erased together."""
    bits = _as_bits(bits)
    if u < 1 or len(bits) % u or (m is not None and m % u):
        raise ValueError(f"group size u={u} must divide the symbol size and the block length")
    groups = rng.random(len(bits) // u) < eps
    return SoftObservation.from_ternary(bits, np.repeat(groups, u), kind="qec", param=eps)


def awgn_bpsk_transmit(bits, N0: float, rng: np.random.Generator) -> SoftObservation:
    """BPSK (0 -> +1, 1 -> -1) plus N(0, N0/2) noise; L = 4 r / N0."""
    if N0 <= 0:
        raise ValueError("N0 must be positive")
    bits = _as_bits(bits)
    r = 1.0 - 2.0 * bits + rng.normal(0.0, np.sqrt(N0 / 2.0), size=bits.shape)
    return SoftObservation(llr=4.0 * r / N0, kind="awgn", param=N0)


def _bit_table(m: int) -> np.ndarray:
    return ((np.arange(1 << m)[:, None] >> np.arange(m)) & 1).astype(bool)


def reliability_matrix(obs: SoftObservation, spec: CodeSpec) -> np.ndarray:
    """q x N matrix of symbol posteriors, assuming independent bits."""
    if len(obs) != spec.n:
        raise ValueError(f"observation has {len(obs)} bits, code needs {spec.n}")
    p1 = expit(-obs.llr).reshape(spec.N, spec.m)
    p0 = expit(obs.llr).reshape(spec.N, spec.m)
    table = _bit_table(spec.m)
    pi = np.ones((spec.q, spec.N))
    for b in range(spec.m):
        pi *= np.where(table[:, b, None], p1[None, :, b], p0[None, :, b])
    return pi


def worst_case_pattern(
    spec: CodeSpec,
    e: int,
    f: int,
    codeword=None,
    rng: np.random.Generator | None = None,
    magnitude: float = np.inf,
):
    """Place e single-bit errors and f bit erasures the way that hurts ASD most.

    Errors go into e distinct symbols, one flipped bit each.  Erasures are
    spread as evenly as possible over the other N - e symbols.  Returns
    ``(obs, codeword)``; the all-zero codeword is used unless one is given.
    With ``rng`` the symbol and bit positions are randomised.
    """
    N, m = spec.N, spec.m
    if e < 0 or f < 0 or e > N or f > m * (N - e):
        raise ValueError(f"cannot place e={e} errors and f={f} erasures in {N} symbols of {m} bits")
    cw = np.zeros(N, dtype=np.int64) if codeword is None else np.asarray(codeword, dtype=np.int64)
    bits = binary_image(cw, spec).astype(np.uint8)
    order = np.arange(N) if rng is None else rng.permutation(N)
    flipped = np.zeros(spec.n, dtype=bool)
    erased = np.zeros(spec.n, dtype=bool)

    def bit_positions(sym, count):
        offs = np.arange(m) if rng is None else rng.permutation(m)
        return sym * m + offs[:count]

    for sym in order[:e]:
        flipped[bit_positions(sym, 1)] = True
    rest = order[e:]
    if f:
        base, extra = divmod(f, len(rest))
        for idx, sym in enumerate(rest):
            cnt = base + (1 if idx < extra else 0)
            if cnt:
                erased[bit_positions(sym, cnt)] = True
    rx = bits ^ flipped
    obs = SoftObservation.from_ternary(rx, erased, kind="mixed", magnitude=magnitude)
    return obs, cw


def random_codeword(spec: CodeSpec, rng: np.random.Generator) -> np.ndarray:
    return encode(rng.integers(0, spec.q, size=spec.K), spec)


def type_histogram(obs: SoftObservation, spec: CodeSpec, truth=None, mode: str | None = None) -> TypeHistogram:
    """Histogram of symbol types.

    ``mode='erasure'`` counts erased bits per symbol; ``mode='error'``
    counts bit disagreements between the hard decision and ``truth``.
    The default is 'error' when a truth codeword is supplied.
    """
    if mode is None:
        mode = "erasure" if truth is None else "error"
    if mode == "erasure":
        per_symbol = obs.erased().reshape(spec.N, spec.m).sum(axis=1)
    elif mode == "error":
        if truth is None:
            raise ValueError("error-type histogram needs the transmitted codeword")
        tb = binary_image(truth, spec)
        per_symbol = (obs.hard_bits() != tb).reshape(spec.N, spec.m).sum(axis=1)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return TypeHistogram(np.bincount(per_symbol, minlength=spec.m + 1), kind=mode)
