import itertools

import numpy as np
import pytest

from rsasd.galois import mul, power
from rsasd.rscode import (
    binary_image,
    encode,
    from_bits,
    hamming_distance,
    is_codeword,
    random_message,
    rs_code,
    syndrome,
)


def test_zero_message(rs73):
    assert not encode([0, 0, 0], rs73).any()


def test_constant_codeword():
    spec = rs_code(7, 1, 3)
    assert encode([5], spec).tolist() == [5] * 7


def test_ones_message_matches_direct_sum(rs73):
    gf = rs73.field
    want = [1 ^ gf.alpha_pow(j) ^ gf.alpha_pow(2 * j) for j in range(7)]
    assert encode([1, 1, 1], rs73).tolist() == want


def test_message_length_checked(rs73):
    with pytest.raises(ValueError):
        encode([1, 2], rs73)
    with pytest.raises(ValueError):
        encode([1, 2, 9], rs73)


def test_bits():
    spec = rs_code(7, 3, 3)
    assert binary_image([0], spec).tolist() == [0, 0, 0]
    assert binary_image([5], spec).tolist() == [1, 0, 1]
    with pytest.raises(ValueError):
        from_bits([1, 0], spec)


def test_bit_round_trip(rs255, rng):
    c = encode(random_message(rs255, rng), rs255)
    assert np.array_equal(from_bits(binary_image(c, rs255), rs255), c)


def test_single_error_syndrome(rs1511):
    gf = rs1511.field
    for j in (0, 4, 14):
        w = np.zeros(15, dtype=np.int64)
        w[j] = 9
        want = [mul(9, power(gf.alpha_pow(i), j, gf), gf) for i in range(1, 5)]
        assert syndrome(w, rs1511).tolist() == want


def test_rs73_exhaustive_mds(rs73):
    words = [encode(list(msg), rs73) for msg in itertools.product(range(8), repeat=3)]
    assert all(is_codeword(c, rs73) for c in words)
    weights = [np.count_nonzero(c) for c in words[1:]]
    assert min(weights) == 5 == rs73.d_min


def test_linearity(rs255, rng):
    for _ in range(20):
        a, b = random_message(rs255, rng), random_message(rs255, rng)
        assert np.array_equal(encode(a, rs255) ^ encode(b, rs255), encode(a ^ b, rs255))


def test_corrupted_words_fail_parity(rs1511, rng):
    for _ in range(50):
        c = encode(random_message(rs1511, rng), rs1511)
        bits = binary_image(c, rs1511)
        assert is_codeword(from_bits(bits, rs1511), rs1511)
        bits[rng.integers(rs1511.n)] ^= 1
        assert not is_codeword(from_bits(bits, rs1511), rs1511)


def test_spec_validation():
    with pytest.raises(ValueError):
        rs_code(7, 0, 3)
    with pytest.raises(ValueError):
        rs_code(8, 3, 3)
    with pytest.raises(ValueError):
        rs_code(3, 2, 3, eval_points=[1, 1, 2])


def test_custom_points_refuse_syndromes():
    spec = rs_code(6, 2, 3, eval_points=[1, 2, 3, 4, 5, 6])
    assert not spec.narrow_sense
    c = encode([1, 1], spec)
    assert c.tolist() == [0, 3, 2, 5, 4, 7]
    with pytest.raises(ValueError):
        syndrome(c, spec)


def test_properties(rs255):
    assert (rs255.n, rs255.k, rs255.d_min) == (2040, 1912, 17)
    assert float(rs255.rate) == pytest.approx(239 / 255)
    assert hamming_distance([1, 2, 3], [1, 0, 3]) == 1
