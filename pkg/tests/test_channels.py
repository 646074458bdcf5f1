import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import erfc

from rsasd.asd import cost, score
from rsasd.channels import (
    SoftObservation,
    awgn_bpsk_transmit,
    bec_transmit,
    bsc_transmit,
    ebn0_to_n0,
    qec_transmit,
    random_codeword,
    reliability_matrix,
    trial_rng,
    type_histogram,
    worst_case_pattern,
)
from rsasd.mas import proposed_mas
from rsasd.rscode import binary_image, rs_code


def test_bec_extremes(rng):
    bits = rng.integers(0, 2, 1000)
    clean = bec_transmit(bits, 0.0, rng)
    assert not clean.erased().any()
    assert np.array_equal(clean.hard_bits(), bits)
    assert bec_transmit(bits, 1.0, rng).erased().all()


def test_bec_erasure_rate(rng):
    obs = bec_transmit(np.zeros(10**6, dtype=np.uint8), 0.1, rng)
    frac = obs.erased().mean()
    assert abs(frac - 0.1) < 3 * np.sqrt(0.1 * 0.9 / 10**6)


def test_awgn_noiseless_llr():
    class ZeroNoise:
        def normal(self, loc, scale, size):
            return np.zeros(size)

    obs = awgn_bpsk_transmit(np.array([0, 1]), 0.5, ZeroNoise())
    assert obs.llr.tolist() == [8.0, -8.0]


def test_awgn_vanishing_noise(rng):
    bits = rng.integers(0, 2, 5000).astype(np.uint8)
    obs = awgn_bpsk_transmit(bits, 1e-4, rng)
    assert np.array_equal(obs.hard_bits(), bits)
    assert np.abs(obs.llr).min() > 1000


def test_awgn_bit_error_rate(rng):
    obs = awgn_bpsk_transmit(np.zeros(10**6, dtype=np.uint8), 1.0, rng)
    p = 0.5 * erfc(1.0)
    assert abs(obs.hard_bits().mean() - p) < 3 * np.sqrt(p * (1 - p) / 10**6)


def test_snr_convention():
    assert ebn0_to_n0(0.0, 0.5) == pytest.approx(2.0)
    assert ebn0_to_n0(10.0, 1.0) == pytest.approx(0.1)


def test_bsc_llr_magnitude(rng):
    obs = bsc_transmit(np.zeros(100, dtype=np.uint8), 0.1, rng)
    assert np.allclose(np.abs(obs.llr), np.log(9))


def test_reliability_matrix_columns(rs1511, rng):
    obs = SoftObservation.from_ternary(binary_image(np.arange(15), rs1511), np.zeros(60, bool))
    Pi = reliability_matrix(obs, rs1511)
    assert np.array_equal(Pi, np.eye(16)[:, :15])
    erased = np.zeros(60, bool)
    erased[[0, 1]] = True
    Pi = reliability_matrix(SoftObservation.from_ternary(np.zeros(60), erased), rs1511)
    assert sorted(Pi[:, 0].tolist())[-4:] == [0.25] * 4


def test_reliability_matrix_product_oracle():
    spec = rs_code(7, 3, 3)
    llr = np.full(21, np.inf)
    llr[0] = np.log(0.7 / 0.3)
    llr[1] = -np.log(0.6 / 0.4)
    Pi = reliability_matrix(SoftObservation(llr), spec)
    # bit0 is 0 w.p. 0.7, bit1 is 1 w.p. 0.6, bit2 is known 0
    want = {0: 0.7 * 0.4, 1: 0.3 * 0.4, 2: 0.7 * 0.6, 3: 0.3 * 0.6}
    for sym, p in want.items():
        assert Pi[sym, 0] == pytest.approx(p, abs=1e-15)
    assert Pi[4:, 0].sum() == 0


@given(st.integers(0, 2**32 - 1), st.floats(0.05, 4.0))
def test_reliability_columns_sum_to_one(seed, N0):
    spec = rs_code(15, 11, 4)
    rng = np.random.default_rng(seed)
    obs = awgn_bpsk_transmit(rng.integers(0, 2, spec.n), N0, rng)
    Pi = reliability_matrix(obs, spec)
    assert np.all(np.abs(Pi.sum(axis=0) - 1) <= 1e-12)


def test_worst_case_placement():
    spec = rs_code(7, 3, 3)
    obs, cw = worst_case_pattern(spec, 0, 7)
    assert obs.erased().reshape(7, 3).sum(axis=1).tolist() == [1] * 7
    obs, cw = worst_case_pattern(spec, 2, 3)
    er = obs.erased().reshape(7, 3).sum(axis=1)
    wrong = (obs.hard_bits() != binary_image(cw, spec)) & ~obs.erased()
    flips = wrong.reshape(7, 3).sum(axis=1)
    assert np.count_nonzero(er | flips) == 5
    assert not np.any((er > 0) & (flips > 0))
    assert flips.sum() == 2 and er.sum() == 3
    obs, _ = worst_case_pattern(spec, 0, 9)
    assert sorted(obs.erased().reshape(7, 3).sum(axis=1).tolist()) == [1, 1, 1, 1, 1, 2, 2]


def test_worst_case_overflow_matches_score_and_cost():
    spec = rs_code(7, 3, 3)
    M = 4
    obs, cw = worst_case_pattern(spec, 0, 9)
    mm = proposed_mas(obs.hard_bits(), obs.erased(), spec, M)
    # five 1-erased symbols score M/2; two 2-erased symbols are zeroed
    assert score(mm, cw) == 5 * M // 2
    assert cost(mm) == 5 * 2 * (M // 2) * (M // 2 + 1) // 2


def test_worst_case_rejects_impossible():
    spec = rs_code(7, 3, 3)
    with pytest.raises(ValueError):
        worst_case_pattern(spec, 8, 0)
    with pytest.raises(ValueError):
        worst_case_pattern(spec, 2, 16)


def test_worst_case_minimises_score(rs1511):
    """No random placement of (e, f) scores lower at no greater cost."""
    rng = np.random.default_rng(5)
    M = 2
    for e, f in [(1, 4), (2, 3), (0, 8), (3, 6)]:
        obs, cw = worst_case_pattern(rs1511, e, f)
        mm = proposed_mas(obs.hard_bits(), obs.erased(), rs1511, M)
        s0, c0 = score(mm, cw), cost(mm)
        bits = binary_image(cw, rs1511)
        for _ in range(2500):
            pos = rng.permutation(rs1511.n)
            flip = np.zeros(rs1511.n, bool)
            flip[pos[:e]] = True
            er = np.zeros(rs1511.n, bool)
            er[pos[e : e + f]] = True
            m2 = proposed_mas(bits ^ flip, er, rs1511, M)
            assert not (score(m2, cw) < s0 and cost(m2) <= c0)


def test_qec_whole_symbols(rng):
    spec = rs_code(15, 11, 4)
    obs = qec_transmit(np.zeros(spec.n, np.uint8), 4, 0.3, rng, m=4)
    per = obs.erased().reshape(15, 4).sum(axis=1)
    assert set(per.tolist()) <= {0, 4}
    with pytest.raises(ValueError):
        qec_transmit(np.zeros(spec.n, np.uint8), 3, 0.3, rng, m=4)


def test_type_histogram(rs1511, rng):
    cw = random_codeword(rs1511, rng)
    bits = binary_image(cw, rs1511)
    clean = SoftObservation.from_ternary(bits, np.zeros(rs1511.n, bool))
    assert type_histogram(clean, rs1511).counts[0] == 15
    one = np.zeros(rs1511.n, bool)
    one[::4] = True
    assert type_histogram(SoftObservation.from_ternary(bits, one), rs1511).counts[1] == 15
    obs = bec_transmit(bits, 0.3, rng)
    h = type_histogram(obs, rs1511)
    assert h.N == 15
    assert int(np.sum(np.arange(5) * h.counts)) == obs.erased().sum()
    err = bsc_transmit(bits, 0.2, rng)
    he = type_histogram(err, rs1511, truth=cw)
    assert int(np.sum(np.arange(5) * he.counts)) == int((err.hard_bits() != bits).sum())


def test_trial_streams_are_reproducible_and_distinct():
    a = trial_rng(7, 3).random(4)
    assert np.array_equal(a, trial_rng(7, 3).random(4))
    assert not np.array_equal(a, trial_rng(7, 4).random(4))
    assert not np.array_equal(a, trial_rng(8, 3).random(4))


def test_nan_llr_rejected():
    with pytest.raises(ValueError):
        SoftObservation(np.array([0.0, np.nan]))
