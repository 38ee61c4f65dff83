"""Integral LLL reduction and integer-relation search.

The reduction keeps the Gram-Schmidt data as exact integers (the
d_i / lambda_ij formulation), so the result is reproducible bit for bit
regardless of the size of the entries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath as mp

__all__ = ["lll_reduce", "integer_relations"]


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> list:
    """LLL-reduce the rows of an integer matrix (rows must be independent)."""
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return []
    p, q = delta.numerator, delta.denominator
    d = [0] * (n + 1)
    d[0] = 1
    lam = [[0] * n for _ in range(n)]

    # 1-based indices below follow the classical presentation of the algorithm
    def red(k, l):
        dl = d[l]
        lk = lam[k - 1][l - 1]
        if 2 * abs(lk) > dl:
            qq = (2 * lk + dl) // (2 * dl)
            bk, bl = b[k - 1], b[l - 1]
            for i in range(len(bk)):
                bk[i] -= qq * bl[i]
            lam[k - 1][l - 1] = lk - qq * dl
            for i in range(1, l):
                lam[k - 1][i - 1] -= qq * lam[l - 1][i - 1]

    def swap(k, kmax):
        b[k - 1], b[k - 2] = b[k - 2], b[k - 1]
        for j in range(1, k - 1):
            lam[k - 1][j - 1], lam[k - 2][j - 1] = lam[k - 2][j - 1], lam[k - 1][j - 1]
        lm = lam[k - 1][k - 2]
        B = (d[k - 2] * d[k] + lm * lm) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i - 1][k - 1]
            lam[i - 1][k - 1] = (d[k] * lam[i - 1][k - 2] - lm * t) // d[k - 1]
            lam[i - 1][k - 2] = (B * t + lm * lam[i - 1][k - 1]) // d[k]
        d[k - 1] = B

    d[1] = _dot(b[0], b[0])
    if d[1] == 0:
        raise ValueError("basis vectors must be linearly independent")
    k, kmax = 2, 1
    while k <= n:
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = _dot(b[k - 1], b[j - 1])
                for i in range(1, j):
                    u = (d[i] * u - lam[k - 1][i - 1] * lam[j - 1][i - 1]) // d[i - 1]
                if j < k:
                    lam[k - 1][j - 1] = u
                else:
                    d[k] = u
                    if u == 0:
                        raise ValueError("basis vectors must be linearly independent")
        while True:
            red(k, k - 1)
            lm = lam[k - 1][k - 2]
            if q * d[k] * d[k - 2] < p * d[k - 1] ** 2 - q * lm * lm:
                swap(k, kmax)
                k = max(2, k - 1)
            else:
                break
        for l in range(k - 2, 0, -1):
            red(k, l)
        k += 1
    return b


def integer_relations(values: Sequence, scale_bits: int, use_imag: bool = True) -> list:
    """Short integer vectors c with sum c_i v_i ~ 0, best first.

    Builds the lattice spanned by rows [e_i | N Re v_i | N Im v_i] with
    N = 2^scale_bits and returns the coefficient parts of the reduced rows.
    """
    n = len(values)
    rows = []
    with mp.workprec(scale_bits + 64):
        N = mp.ldexp(mp.mpf(1), scale_bits)
        for i, v in enumerate(values):
            v = mp.mpc(v)
            row = [1 if j == i else 0 for j in range(n)]
            row.append(int(mp.nint(N * v.real)))
            if use_imag:
                row.append(int(mp.nint(N * v.imag)))
            rows.append(row)
    reduced = lll_reduce(rows)
    reduced.sort(key=lambda r: _dot(r, r))
    return [r[:n] for r in reduced]
