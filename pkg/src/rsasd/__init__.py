"""Algebraic soft-decision decoding of Reed-Solomon codes with bit-level
erasure strategies, decoding-region calculators and FER bounds."""

from .galois import FieldTables, build_field
from .rscode import CodeSpec, encode, rs_code, syndrome

__version__ = "0.1.0"
