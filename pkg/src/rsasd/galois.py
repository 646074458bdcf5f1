"""GF(2^m) arithmetic through exponent / logarithm tables.

Elements are integers whose bits are polynomial-basis coefficients over
GF(2) (bit 0 is the constant term).  Addition is XOR and is not wrapped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Primitive polynomials, bit-packed with the x^m term included.
DEFAULT_PRIM_POLY: dict[int, int] = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


@dataclass(frozen=True, eq=False)
class FieldTables:
    """Lookup tables for GF(2^m).

    ``exp`` holds alpha^0 .. alpha^(q-2) and is stored twice over so that
    ``exp[log[a] + log[b]]`` never needs a modulo.  ``log[0]`` is unused
    and set to -1.
    """

    m: int
    prim_poly: int
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return 1 << self.m

    @property
    def order(self) -> int:
        """Multiplicative group order, q - 1."""
        return (1 << self.m) - 1

    @property
    def exp_table(self) -> np.ndarray:
        return self.exp[: self.order]

    @property
    def log_table(self) -> np.ndarray:
        return self.log

    def alpha_pow(self, k: int) -> int:
        return int(self.exp[k % self.order])

    def __repr__(self) -> str:
        return f"FieldTables(m={self.m}, prim_poly={self.prim_poly:#b})"


def build_field(m: int, prim_poly: int | None = None) -> FieldTables:
    """Build GF(2^m) tables, rejecting polynomials that are not primitive."""
    if not 1 <= m <= 16:
        raise ValueError(f"extension degree must be in 1..16, got {m}")
    if prim_poly is None:
        prim_poly = DEFAULT_PRIM_POLY[m]
    if prim_poly.bit_length() != m + 1:
        raise ValueError(
            f"polynomial {prim_poly:#b} has degree {prim_poly.bit_length() - 1}, expected {m}"
        )
    order = (1 << m) - 1
    exp = np.zeros(2 * order, dtype=np.int64)
    log = np.full(1 << m, -1, dtype=np.int64)
    x = 1
    for i in range(order):
        if log[x] != -1:
            raise ValueError(
                f"polynomial {prim_poly:#b} is not primitive: alpha has order {i}"
            )
        exp[i] = x
        log[x] = i
        x <<= 1
        if x >> m:
            x ^= prim_poly
    if x != 1:
        raise ValueError(f"polynomial {prim_poly:#b} is not primitive (alpha^{order} != 1)")
    exp[order:] = exp[:order]
    exp.flags.writeable = False
    log.flags.writeable = False
    return FieldTables(m=m, prim_poly=prim_poly, exp=exp, log=log)


def _check(a: int, t: FieldTables) -> None:
    if not 0 <= a < t.q:
        raise ValueError(f"{a} is not an element of GF(2^{t.m})")


def mul(a: int, b: int, t: FieldTables) -> int:
    _check(a, t)
    _check(b, t)
    if a == 0 or b == 0:
        return 0
    return int(t.exp[t.log[a] + t.log[b]])


def inv(a: int, t: FieldTables) -> int:
    _check(a, t)
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(2^m)")
    return int(t.exp[(t.order - t.log[a]) % t.order])


def div(a: int, b: int, t: FieldTables) -> int:
    if b == 0:
        raise ZeroDivisionError("division by 0 in GF(2^m)")
    if a == 0:
        return 0
    return int(t.exp[(t.log[a] - t.log[b]) % t.order])


def power(a: int, k: int, t: FieldTables) -> int:
    _check(a, t)
    if k == 0:
        return 1
    if a == 0:
        return 0
    return int(t.exp[(t.log[a] * k) % t.order])


def mul_vec(a, b, t: FieldTables) -> np.ndarray:
    """Elementwise product of integer arrays (broadcasting)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = t.exp[t.log[a] + t.log[b]]
    return np.where((a == 0) | (b == 0), 0, out)


def poly_eval(coeffs, x, t: FieldTables) -> np.ndarray:
    """Evaluate sum coeffs[i] x^i at each point of ``x`` (Horner)."""
    x = np.asarray(x, dtype=np.int64)
    acc = np.zeros_like(x)
    for c in reversed(list(coeffs)):
        acc = mul_vec(acc, x, t) ^ int(c)
    return acc
