"""Shared oracles for the test modules and the acceptance suite."""

import itertools

import numpy as np

from rsasd.asd import asd_decode
from rsasd.channels import SoftObservation, worst_case_pattern
from rsasd.decoders import bm_decode
from rsasd.mas import proposed_mas
from rsasd.regions import mixed_region_finite


def bm_exhaustive_failures(spec, codeword, radius):
    """Decode every pattern with 2e + f <= radius (all error positions and
    values, all erasure position sets) and return (patterns, failures)."""
    N, q = spec.N, spec.q
    total = failed = 0
    values = range(1, q)
    for e in range(radius // 2 + 1):
        for f in range(radius - 2 * e + 1):
            for err_pos in itertools.combinations(range(N), e):
                rest = [j for j in range(N) if j not in err_pos]
                for er_pos in itertools.combinations(rest, f):
                    for vals in itertools.product(values, repeat=e):
                        word = codeword.copy()
                        for j, v in zip(err_pos, vals):
                            word[j] ^= v
                        # garbage in erased positions must not matter
                        for j in er_pos:
                            word[j] ^= (j * 7 + 3) % q
                        total += 1
                        out = bm_decode(word, er_pos, spec)
                        if out is None or not np.array_equal(out, codeword):
                            failed += 1
    return total, failed


def region_points(spec, M):
    """Every (e, f) with e + f <= N inside the finite-M region."""
    pts = []
    for f in range(spec.N + 1):
        e_max = mixed_region_finite(spec.N, spec.K, M, f)
        for e in range(0, min(e_max, spec.N - f) + 1):
            pts.append((e, f))
    return pts


def asd_lists_worst_case(spec, M, e, f, codeword, rng=None):
    obs, cw = worst_case_pattern(spec, e, f, codeword=codeword, rng=rng)
    mm = proposed_mas(obs.hard_bits(), obs.erased(), spec, M)
    return asd_decode(mm, spec, obs).lists(cw)


def crafted_bgmd_input(spec, e, f, codeword, rng, weak=0.1, strong=5.0):
    """LLRs whose f least reliable bits are the erasures of the worst-case
    pattern and whose e confident flips sit in other symbols."""
    obs, cw = worst_case_pattern(spec, e, f, codeword=codeword, rng=rng)
    er = obs.erased()
    hard = obs.hard_bits()
    mag = np.where(er, weak * (1 + rng.random(spec.n)) / 2, strong * (1 + rng.random(spec.n)))
    sign = 1.0 - 2.0 * hard
    # erased bits lean the wrong way half of the time
    sign = np.where(er, np.where(rng.random(spec.n) < 0.5, 1.0, -1.0), sign)
    return SoftObservation(sign * mag), cw
