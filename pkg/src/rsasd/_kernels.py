"""Numba kernels for bivariate interpolation and root finding over GF(2^m).

Polynomials are dense int64 arrays indexed ``[y_degree, x_degree]``.
Field multiplication is a lookup in a full q x q product table ``mt``.
In characteristic 2 a binomial C(a, r) is odd iff r's bits are a subset of a's.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def koetter_interpolate(xs, ys, mults, kw, L, DX, mt):
    """Minimal (1, kw)-weighted-degree Q with Q passing through each
    (xs[p], ys[p]) with multiplicity mults[p]; Y-degree at most L.

    Ties in weighted degree go to the lower Y-degree.
    """
    G = np.zeros((L + 1, L + 1, DX), np.int64)
    for j in range(L + 1):
        G[j, j, 0] = 1
    lead = np.zeros(L + 1, np.int64)
    top = np.zeros(L + 1, np.int64)
    disc = np.zeros(L + 1, np.int64)
    xpow = np.zeros(DX, np.int64)
    ypow = np.zeros(L + 1, np.int64)
    for p in range(len(xs)):
        x = xs[p]
        y = ys[p]
        mult = mults[p]
        xpow[0] = 1
        for k in range(1, DX):
            xpow[k] = mt[xpow[k - 1], x]
        ypow[0] = 1
        for k in range(1, L + 1):
            ypow[k] = mt[ypow[k - 1], y]
        for s in range(mult):
            for r in range(mult - s):
                # Hasse derivative D_{r,s} of every basis polynomial at (x, y)
                for j in range(L + 1):
                    acc = 0
                    for b in range(s, L + 1):
                        if (s & ~b) != 0:
                            continue
                        inner = 0
                        for a in range(r, top[j] + 1):
                            c = G[j, b, a]
                            if c != 0 and (r & ~a) == 0:
                                inner ^= mt[c, xpow[a - r]]
                        if inner != 0:
                            acc ^= mt[inner, ypow[b - s]]
                    disc[j] = acc
                jstar = -1
                best = 0
                for j in range(L + 1):
                    if disc[j] != 0:
                        w = lead[j] + kw * j
                        if jstar < 0 or w < best:
                            jstar = j
                            best = w
                if jstar < 0:
                    continue
                dstar = disc[jstar]
                for j in range(L + 1):
                    if j == jstar or disc[j] == 0:
                        continue
                    dj = disc[j]
                    hi = max(top[j], top[jstar])
                    for b in range(L + 1):
                        for a in range(hi + 1):
                            G[j, b, a] = mt[dstar, G[j, b, a]] ^ mt[dj, G[jstar, b, a]]
                    while hi > 0:
                        nz = False
                        for b in range(L + 1):
                            if G[j, b, hi] != 0:
                                nz = True
                                break
                        if nz:
                            break
                        hi -= 1
                    top[j] = hi
                # multiply the minimal polynomial by (X - x)
                t = top[jstar]
                for b in range(L + 1):
                    for a in range(t + 1, 0, -1):
                        G[jstar, b, a] = G[jstar, b, a - 1] ^ mt[x, G[jstar, b, a]]
                    G[jstar, b, 0] = mt[x, G[jstar, b, 0]]
                top[jstar] = t + 1
                lead[jstar] += 1
    jbest = 0
    for j in range(1, L + 1):
        if lead[j] + kw * j < lead[jbest] + kw * jbest:
            jbest = j
    return G[jbest].copy()


@njit(cache=True)
def _roots_at_x0(P, q, mt, out):
    """Roots in GF(q) of the univariate polynomial sum_b P[b, 0] Y^b."""
    L1 = P.shape[0]
    n = 0
    for y in range(q):
        acc = 0
        for b in range(L1 - 1, -1, -1):
            acc = mt[acc, y] ^ P[b, 0]
        if acc == 0:
            out[n] = y
            n += 1
    return n


@njit(cache=True)
def _substitute(P, g, mt, out):
    """out = P(X, X*Y + g) / X^v with v as large as possible."""
    L1, DX = P.shape
    out[:, :] = 0
    gpow = np.zeros(L1, np.int64)
    gpow[0] = 1
    for k in range(1, L1):
        gpow[k] = mt[gpow[k - 1], g]
    for b in range(L1):
        for a in range(DX):
            c = P[b, a]
            if c == 0:
                continue
            for t in range(b + 1):
                if (t & ~b) != 0:
                    continue
                if a + t >= DX:
                    raise ValueError("substitution exceeded the X-degree buffer")
                out[t, a + t] ^= mt[c, gpow[b - t]]
    v = DX
    for b in range(L1):
        for a in range(DX):
            if out[b, a] != 0:
                if a < v:
                    v = a
                break
    if 0 < v < DX:
        for b in range(L1):
            for a in range(DX - v):
                out[b, a] = out[b, a + v]
            for a in range(DX - v, DX):
                out[b, a] = 0


@njit(cache=True)
def roth_ruckenstein(Q, K, q, mt):
    """All f with deg f < K such that (Y - f(X)) divides Q.

    Returns an array of shape (count, K) of coefficient vectors f_0..f_{K-1},
    found by depth-first search over the coefficients.
    """
    L1, DX = Q.shape
    buf = np.zeros((K + 1, L1, DX), np.int64)
    out = np.zeros((L1, K), np.int64)
    nout = 0
    roots = np.zeros((K, q), np.int64)
    nroots = np.zeros(K, np.int64)
    ridx = np.zeros(K, np.int64)
    coef = np.zeros(K, np.int64)
    # strip common powers of X
    _substitute_identity(Q, buf[0])
    nroots[0] = _roots_at_x0(buf[0], q, mt, roots[0])
    d = 0
    while d >= 0:
        if ridx[d] < nroots[d]:
            g = roots[d, ridx[d]]
            ridx[d] += 1
            coef[d] = g
            _substitute(buf[d], g, mt, buf[d + 1])
            if d + 1 == K:
                zero = True
                for a in range(DX):
                    if buf[K, 0, a] != 0:
                        zero = False
                        break
                if zero and nout < L1:
                    out[nout, :] = coef
                    nout += 1
            else:
                d += 1
                nroots[d] = _roots_at_x0(buf[d], q, mt, roots[d])
                ridx[d] = 0
        else:
            d -= 1
    return out[:nout].copy()


@njit(cache=True)
def _substitute_identity(P, out):
    L1, DX = P.shape
    out[:, :] = P
    v = DX
    for b in range(L1):
        for a in range(DX):
            if out[b, a] != 0:
                if a < v:
                    v = a
                break
    if 0 < v < DX:
        for b in range(L1):
            for a in range(DX - v):
                out[b, a] = out[b, a + v]
            for a in range(DX - v, DX):
                out[b, a] = 0
