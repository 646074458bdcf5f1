"""Reed-Solomon codes in evaluation form and their binary images."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .galois import FieldTables, build_field, poly_eval


@dataclass(frozen=True, eq=False)
class CodeSpec:
    """An (N, K) RS code over GF(2^m) with ordered evaluation points."""

    N: int
    K: int
    m: int
    field: FieldTables = dc_field(repr=False)
    eval_points: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        pts = self.eval_points
        if len(pts) != self.N:
            raise ValueError(f"need {self.N} evaluation points, got {len(pts)}")
        if len(set(int(p) for p in pts)) != self.N:
            raise ValueError("evaluation points must be distinct")
        if not 1 <= self.K <= self.N:
            raise ValueError(f"need 1 <= K <= N, got K={self.K}, N={self.N}")
        if self.N > self.field.q:
            raise ValueError(f"N={self.N} exceeds field size {self.field.q}")

    @property
    def n(self) -> int:
        return self.N * self.m

    @property
    def k(self) -> int:
        return self.K * self.m

    @property
    def d_min(self) -> int:
        return self.N - self.K + 1

    @property
    def rate(self) -> Fraction:
        return Fraction(self.K, self.N)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def narrow_sense(self) -> bool:
        """True when the points are alpha^0..alpha^(N-1) with N = 2^m - 1."""
        if self.N != self.field.order:
            return False
        return bool(np.array_equal(self.eval_points, self.field.exp[: self.N]))

    def __repr__(self) -> str:
        return f"RS({self.N},{self.K}) over GF(2^{self.m})"


def rs_code(N: int, K: int, m: int, prim_poly: int | None = None, eval_points=None) -> CodeSpec:
    """RS(N, K) over GF(2^m); points default to alpha^0, ..., alpha^(N-1)."""
    gf = build_field(m, prim_poly)
    if eval_points is None:
        if N > gf.order:
            raise ValueError(f"N={N} exceeds 2^m - 1 = {gf.order}; pass eval_points explicitly")
        pts = gf.exp[:N].copy()
    else:
        pts = np.asarray(eval_points, dtype=np.int64)
    pts.flags.writeable = False
    return CodeSpec(N=N, K=K, m=m, field=gf, eval_points=pts)


def encode(message, spec: CodeSpec) -> np.ndarray:
    """Evaluate the message polynomial g_0 + g_1 x + ... at every point."""
    msg = np.asarray(message, dtype=np.int64)
    if msg.shape != (spec.K,):
        raise ValueError(f"message must have {spec.K} symbols, got shape {msg.shape}")
    if np.any((msg < 0) | (msg >= spec.q)):
        raise ValueError("message symbols out of field range")
    return poly_eval(msg, spec.eval_points, spec.field)


def binary_image(symbols, spec: CodeSpec) -> np.ndarray:
    """Polynomial-basis bits of each symbol, LSB first; length N*m."""
    sym = np.asarray(symbols, dtype=np.int64)
    bits = (sym[:, None] >> np.arange(spec.m)) & 1
    return bits.reshape(-1).astype(np.uint8)


def from_bits(bits, spec: CodeSpec) -> np.ndarray:
    b = np.asarray(bits, dtype=np.int64)
    if b.shape != (spec.n,):
        raise ValueError(f"expected {spec.n} bits, got shape {b.shape}")
    return (b.reshape(spec.N, spec.m) << np.arange(spec.m)).sum(axis=1)


def syndrome(word, spec: CodeSpec) -> np.ndarray:
    """S_i = sum_j word_j alpha^(i j), i = 1..N-K (narrow-sense codes only)."""
    if not spec.narrow_sense:
        raise ValueError(f"{spec!r} does not use the narrow-sense point set")
    w = np.asarray(word, dtype=np.int64)
    gf = spec.field
    nz = np.nonzero(w)[0]
    if len(nz) == 0:
        return np.zeros(spec.N - spec.K, dtype=np.int64)
    i = np.arange(1, spec.N - spec.K + 1)[:, None]
    terms = gf.exp[(gf.log[w[nz]][None, :] + i * nz[None, :]) % gf.order]
    return np.bitwise_xor.reduce(terms, axis=1)


def is_codeword(word, spec: CodeSpec) -> bool:
    return not np.any(syndrome(word, spec))


def random_message(spec: CodeSpec, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, spec.q, size=spec.K, dtype=np.int64)


def hamming_distance(a, b) -> int:
    return int(np.count_nonzero(np.asarray(a) != np.asarray(b)))

