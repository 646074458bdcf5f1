"""End-to-end decoders: Berlekamp-Massey errors-and-erasures, symbol-level
GMD, and bit-level GMD built on the ASD pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .asd import DEFAULT_COST_BUDGET, DecodeResult, asd_decode, select_codeword, t_of_s
from .channels import SoftObservation
from .mas import proposed_mas
from .regions import mixed_region_finite
from .rscode import CodeSpec, binary_image, from_bits, is_codeword, syndrome


# --- Berlekamp-Massey ------------------------------------------------------


def _pmul(a, b, gf):
    out = [0] * (len(a) + len(b) - 1)
    exp, log = gf.exp, gf.log
    for i, x in enumerate(a):
        if x == 0:
            continue
        lx = log[x]
        for j, y in enumerate(b):
            if y:
                out[i + j] ^= int(exp[lx + log[y]])
    return out


def _scale(a, c, gf):
    if c == 0:
        return [0] * len(a)
    lc = gf.log[c]
    return [int(gf.exp[lc + gf.log[x]]) if x else 0 for x in a]


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] ^= y
    return out


def _trim(a):
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def _eval_all(poly, spec: CodeSpec) -> np.ndarray:
    """poly evaluated at alpha^(-j) for every position j."""
    gf = spec.field
    j = np.arange(spec.N)
    acc = np.zeros(spec.N, dtype=np.int64)
    for i, c in enumerate(poly):
        if c:
            acc ^= gf.exp[(gf.log[c] - i * j) % gf.order]
    return acc


def bm_decode(word, erasures, spec: CodeSpec) -> np.ndarray | None:
    """Correct e errors and f symbol erasures when 2e + f <= N - K.

    Returns the codeword or None.  Outside the bound the decoder may fail
    or return a different codeword, as any bounded-distance decoder does.
    """
    gf = spec.field
    r = np.asarray(word, dtype=np.int64)
    era = sorted({int(p) for p in erasures}) if erasures is not None else []
    two_t = spec.N - spec.K
    f = len(era)
    if f > two_t:
        return None
    S = [int(s) for s in syndrome(r, spec)]
    if not any(S):
        return r.copy()
    gamma = [1]
    for p in era:
        gamma = _pmul(gamma, [1, gf.alpha_pow(p)], gf)
    lam = list(gamma)
    B = list(gamma)
    L = f
    for k in range(f + 1, two_t + 1):
        delta = 0
        for i, c in enumerate(lam):
            if c and k - i >= 1:
                delta ^= int(gf.exp[gf.log[c] + gf.log[S[k - i - 1]]]) if S[k - i - 1] else 0
        xB = [0] + B
        if delta == 0:
            B = xB
            continue
        new = _padd(lam, _scale(xB, delta, gf))
        if 2 * L <= k + f - 1:
            inv = int(gf.exp[(gf.order - gf.log[delta]) % gf.order])
            B = _scale(lam, inv, gf)
            L = k + f - L
        else:
            B = xB
        lam = new
    lam = _trim(lam)
    deg = len(lam) - 1
    if deg != L or 2 * (deg - f) + f > two_t:
        return None
    vals = _eval_all(lam, spec)
    pos = np.nonzero(vals == 0)[0]
    if len(pos) != deg:
        return None
    omega = _pmul(S, lam, gf)[:two_t]
    dlam = [lam[i] if i % 2 == 1 else 0 for i in range(1, len(lam))]
    num = _eval_all(omega, spec)[pos]
    den = _eval_all(dlam, spec)[pos]
    if np.any(den == 0):
        return None
    mag = np.where(num == 0, 0, gf.exp[(gf.log[num] - gf.log[den]) % gf.order])
    out = r.copy()
    out[pos] ^= mag
    if not is_codeword(out, spec):
        return None
    return out


# --- GMD -------------------------------------------------------------------


def symbol_reliability(obs: SoftObservation, spec: CodeSpec) -> np.ndarray:
    return np.abs(obs.llr).reshape(spec.N, spec.m).sum(axis=1)


def gmd_decode(obs: SoftObservation, spec: CodeSpec) -> DecodeResult:
    """Erase the f least reliable symbols, f = (N-K) mod 2, ..., N-K in steps
    of two, running BM each time and keeping the most likely result."""
    hard = from_bits(obs.hard_bits(), spec)
    order = np.argsort(symbol_reliability(obs, spec), kind="stable")
    two_t = spec.N - spec.K
    found = {}
    for f in range(two_t % 2, two_t + 1, 2):
        cw = bm_decode(hard, order[:f], spec)
        if cw is not None:
            found.setdefault(tuple(cw.tolist()), f)
    candidates = [np.array(c, dtype=np.int64) for c in found]
    selected = select_codeword(candidates, obs, spec)
    it = None if selected is None else found[tuple(selected.tolist())]
    return DecodeResult(candidates=candidates, selected=selected, iteration=it)


# --- BGMD ------------------------------------------------------------------


@dataclass(frozen=True)
class BgmdConfig:
    """M: even multiplicity; max_rounds: cap on erased bits (default n-k);
    shortcut: stop as soon as the output is provably fixed."""

    M: int = 2
    max_rounds: int | None = None
    budget: int = DEFAULT_COST_BUDGET
    shortcut: bool = True

    def __post_init__(self):
        if self.M < 2 or self.M % 2:
            raise ValueError(f"M must be an even integer >= 2, got {self.M}")
        if self.max_rounds is not None and self.max_rounds < 0:
            raise ValueError("max_rounds must be nonnegative")


def is_ml_certified(codeword, obs: SoftObservation, spec: CodeSpec) -> bool:
    """Sufficient test that no other codeword is at least as likely.

    Any other codeword differs from this one in at least d symbols, hence in
    d bits of distinct symbols.  At most w of those can be bits where this
    codeword already disagrees with the hard decision, so the rival pays at
    least the d - w smallest |LLR| among the agreeing bits.
    """
    bits = binary_image(codeword, spec)
    mism = bits != obs.hard_bits()
    w = int(mism.sum())
    need = spec.d_min - w
    if need <= 0:
        return False
    mag = np.abs(obs.llr)
    own = float(mag[mism].sum())
    rest = np.partition(mag[~mism], need - 1)[:need] if need < (~mism).sum() else mag[~mism]
    return own < float(rest.sum())


def bgmd_rounds(spec: CodeSpec, cfg: BgmdConfig) -> int:
    """Number of erased bits in the last round (-1 if none can run)."""
    cap = spec.n - spec.k if cfg.max_rounds is None else min(cfg.max_rounds, spec.n - spec.k)
    return _last_round(spec.N, spec.K, cfg.M, cap)


@lru_cache(maxsize=256)
def _last_round(N: int, K: int, M: int, cap: int) -> int:
    last = -1
    for i in range(cap + 1):
        if mixed_region_finite(N, K, M, i) < 0:
            break
        last = i
    return last


def bgmd_decode(obs: SoftObservation, spec: CodeSpec, cfg: BgmdConfig = BgmdConfig()) -> DecodeResult:
    """Bit-level GMD: erase the i least reliable bits for i = 0, 1, ... while
    i bit erasures alone stay inside the decoding region, decode each
    erasure pattern by ASD and keep the most likely codeword found.

    ``DecodeResult.iteration`` is the first round that listed the selected
    codeword.  With ``cfg.shortcut`` the selected codeword and iteration
    are unchanged, but the candidate list only covers the rounds run.
    """
    last = bgmd_rounds(spec, cfg)
    hard = obs.hard_bits()
    order = np.argsort(np.abs(obs.llr), kind="stable")

    if cfg.shortcut and last >= 0:
        # Round 0 gives M to every hard-decision symbol, so a BM output within
        # the certified score threshold is on the round-0 list.
        hard_sym = from_bits(hard, spec)
        cw = bm_decode(hard_sym, (), spec)
        if cw is not None and is_ml_certified(cw, obs, spec):
            if _round0_lists(cw, hard_sym, spec, cfg.M):
                return DecodeResult(candidates=[cw], selected=cw, iteration=0)

    found: dict[tuple, int] = {}
    erased = np.zeros(spec.n, dtype=bool)
    for i in range(last + 1):
        if i:
            erased[order[i - 1]] = True
        mm = proposed_mas(hard, erased, spec, cfg.M)
        res = asd_decode(mm, spec, None, cfg.budget)
        for c in res.candidates:
            found.setdefault(tuple(c.tolist()), i)
        if cfg.shortcut and found:
            best = select_codeword([np.array(c) for c in found], obs, spec)
            if is_ml_certified(best, obs, spec):
                return DecodeResult(
                    candidates=[np.array(c, dtype=np.int64) for c in found],
                    selected=best,
                    iteration=found[tuple(best.tolist())],
                )
    candidates = [np.array(c, dtype=np.int64) for c in found]
    selected = select_codeword(candidates, obs, spec)
    it = None if selected is None else found[tuple(selected.tolist())]
    return DecodeResult(candidates=candidates, selected=selected, iteration=it)


def _round0_lists(cw, hard_sym, spec: CodeSpec, M: int) -> bool:
    agree = int(np.count_nonzero(cw == hard_sym))
    return t_of_s(agree * M, spec.K) > spec.N * M * (M + 1) // 2
