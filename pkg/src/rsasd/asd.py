"""Algebraic soft-decision decoding: score and cost, the sufficient
conditions for list membership, interpolation, factorization and
codeword selection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .channels import SoftObservation
from .galois import FieldTables, mul_vec
from .rscode import CodeSpec, binary_image, encode

DEFAULT_COST_BUDGET = 50_000
# Largest dense interpolation workspace, in coefficients.
MAX_WORKSPACE = 60_000_000


class InterpolationBudgetExceeded(RuntimeError):
    def __init__(self, cost: int, budget: int, detail: str = ""):
        self.cost = cost
        self.budget = budget
        msg = f"interpolation cost {cost} exceeds budget {budget}"
        super().__init__(msg + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class AsymptoticScoreCost:
    """Score ~ s*M and cost ~ c*M^2 as the multiplicity parameter grows."""

    s: float
    c: float

    def __post_init__(self):
        if self.s < 0 or self.c < 0:
            raise ValueError("score and cost coefficients must be nonnegative")


@dataclass
class DecodeResult:
    candidates: list = field(default_factory=list)
    selected: np.ndarray | None = None
    iteration: int | None = None

    @property
    def success(self) -> bool:
        return self.selected is not None

    def lists(self, codeword) -> bool:
        cw = np.asarray(codeword)
        return any(np.array_equal(c, cw) for c in self.candidates)


def _check_matrix(mm, spec: CodeSpec | None = None) -> np.ndarray:
    mm = np.asarray(mm)
    if mm.ndim != 2:
        raise ValueError("multiplicity matrix must be 2-D")
    if spec is not None and mm.shape != (spec.q, spec.N):
        raise ValueError(f"multiplicity matrix has shape {mm.shape}, expected {(spec.q, spec.N)}")
    if np.any(mm < 0):
        raise ValueError("multiplicities must be nonnegative")
    return mm.astype(np.int64)


def score(mm, codeword) -> int:
    mm = _check_matrix(mm)
    cw = np.asarray(codeword, dtype=np.int64)
    if cw.shape != (mm.shape[1],):
        raise ValueError("codeword length does not match the matrix")
    return int(mm[cw, np.arange(len(cw))].sum())


def cost(mm) -> int:
    mm = _check_matrix(mm)
    return int((mm * (mm + 1) // 2).sum())


def t_of_s(S, K: int):
    """Piecewise-linear threshold: (a+1)(S - a(K-1)/2) on a(K-1) < S <= (a+1)(K-1).

    Exact for ``int`` and ``Fraction`` inputs.
    """
    if K < 2:
        raise ValueError("threshold is defined for K >= 2")
    if S <= 0:
        return 0
    k1 = K - 1
    a = math.ceil(Fraction(S) / k1) - 1
    return (a + 1) * (S - Fraction(a * k1, 2))


def certainly_decodable(S, C, K: int, mode: str = "finite") -> bool:
    """Sufficient condition for the transmitted codeword to be on the list.

    finite: integer score S and cost C, tests T(S) > C.
    asymptotic: S and C are the coefficients s and c, tests s >= sqrt(2(K-1)c).
    """
    if mode == "finite":
        return t_of_s(S, K) > C
    if mode == "asymptotic":
        if isinstance(S, AsymptoticScoreCost):
            S, C = S.s, S.c
        return S >= 0 and S * S >= 2 * (K - 1) * C
    raise ValueError(f"unknown mode {mode!r}")


def monomial_count(delta: int, kw: int) -> int:
    """Number of X^a Y^b with a + kw*b <= delta."""
    if delta < 0:
        return 0
    if kw == 0:
        raise ValueError("weight must be positive")
    bmax = delta // kw
    return (bmax + 1) * (delta + 1) - kw * bmax * (bmax + 1) // 2


def interpolation_degree(C: int, K: int) -> tuple[int, int]:
    """Smallest weighted degree with more monomials than constraints, and the
    corresponding largest Y-degree."""
    kw = K - 1
    lo, hi = 0, max(1, C)
    while monomial_count(hi, kw) <= C:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if monomial_count(mid, kw) > C:
            hi = mid
        else:
            lo = mid + 1
    return lo, lo // kw


@dataclass(frozen=True, eq=False)
class BivariatePoly:
    """Q(X, Y) over GF(2^m); ``coeffs[j, i]`` is the coefficient of X^i Y^j."""

    coeffs: np.ndarray

    @property
    def y_degree(self) -> int:
        rows = np.nonzero(self.coeffs.any(axis=1))[0]
        return int(rows[-1]) if len(rows) else -1

    @property
    def x_degree(self) -> int:
        cols = np.nonzero(self.coeffs.any(axis=0))[0]
        return int(cols[-1]) if len(cols) else -1

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def weighted_degree(self, wx: int = 1, wy: int = 1) -> int:
        j, i = np.nonzero(self.coeffs)
        if len(i) == 0:
            return -1
        return int(np.max(wx * i + wy * j))

    def terms(self):
        """(x_degree, y_degree, coefficient) for every nonzero term."""
        j, i = np.nonzero(self.coeffs)
        order = np.lexsort((i, j))
        return [(int(i[t]), int(j[t]), int(self.coeffs[j[t], i[t]])) for t in order]

    def dump(self) -> str:
        return "\n".join(f"{i} {j} {c}" for i, j, c in self.terms())

    def trimmed(self) -> BivariatePoly:
        return BivariatePoly(self.coeffs[: self.y_degree + 1, : self.x_degree + 1].copy())


_MUL_TABLES: dict[tuple[int, int], np.ndarray] = {}
MAX_TABLE_M = 10


def mul_table(gf: FieldTables) -> np.ndarray:
    """Full q x q product table, cached per field."""
    key = (gf.m, gf.prim_poly)
    table = _MUL_TABLES.get(key)
    if table is None:
        if gf.m > MAX_TABLE_M:
            raise ValueError(f"ASD kernels support m <= {MAX_TABLE_M}, got m={gf.m}")
        a = np.arange(gf.q)
        table = mul_vec(a[:, None], a[None, :], gf)
        table.flags.writeable = False
        _MUL_TABLES[key] = table
    return table


def interpolate(mm, spec: CodeSpec, budget: int = DEFAULT_COST_BUDGET) -> BivariatePoly:
    """Minimal (1, K-1)-weighted-degree polynomial through every (x_j, i) with
    multiplicity mm[i, j]."""
    mm = _check_matrix(mm, spec)
    if spec.K < 2:
        raise ValueError("interpolation needs K >= 2")
    C = cost(mm)
    if C > budget:
        raise InterpolationBudgetExceeded(C, budget)
    kw = spec.K - 1
    _, L = interpolation_degree(C, spec.K)
    DX = C + kw * L + 2
    if (L + 1) ** 2 * DX > MAX_WORKSPACE:
        raise InterpolationBudgetExceeded(C, budget, f"workspace {(L + 1) ** 2 * DX} coefficients")
    rows, cols = np.nonzero(mm.T)
    xs = spec.eval_points[rows].astype(np.int64)
    ys = cols.astype(np.int64)
    mults = mm.T[rows, cols].astype(np.int64)
    Q = _kernels.koetter_interpolate(xs, ys, mults, kw, L, DX, mul_table(spec.field))
    return BivariatePoly(Q).trimmed()


def factorize(poly: BivariatePoly, spec: CodeSpec) -> list[np.ndarray]:
    """Every message polynomial g with deg g < K and (Y - g(X)) | Q,
    as coefficient vectors in increasing lexicographic order."""
    if poly.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    Q = poly.trimmed().coeffs
    wdeg = poly.weighted_degree(1, spec.K - 1)
    L = Q.shape[0] - 1
    work = np.zeros((L + 1, wdeg + L + 2), dtype=np.int64)
    work[:, : Q.shape[1]] = Q
    roots = _kernels.roth_ruckenstein(work, spec.K, spec.q, mul_table(spec.field))
    found = sorted({tuple(int(v) for v in r) for r in roots})
    return [np.array(g, dtype=np.int64) for g in found]


def discrepancy(codeword, obs: SoftObservation, spec: CodeSpec) -> float:
    """Negative log-likelihood relative to the hard decision: the summed
    |LLR| of bits where the codeword disagrees with it."""
    bits = binary_image(codeword, spec)
    mism = bits != obs.hard_bits()
    return float(np.abs(obs.llr[mism]).sum())


def select_codeword(candidates, obs: SoftObservation | None, spec: CodeSpec):
    """Most likely candidate; ties go to the lexicographically smallest."""
    if not candidates:
        return None
    if obs is None:
        return min(candidates, key=lambda c: tuple(c.tolist()))
    return min(candidates, key=lambda c: (discrepancy(c, obs, spec), tuple(c.tolist())))


def asd_decode(mm, spec: CodeSpec, obs: SoftObservation | None = None, budget: int = DEFAULT_COST_BUDGET) -> DecodeResult:
    poly = interpolate(mm, spec, budget)
    candidates = [encode(g, spec) for g in factorize(poly, spec)]
    selected = select_codeword(candidates, obs, spec)
    return DecodeResult(candidates=candidates, selected=selected, iteration=0 if selected is not None else None)
