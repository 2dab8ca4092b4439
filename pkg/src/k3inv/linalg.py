"""Exact integer and rational linear algebra.

Matrices are lists of rows of Python ints (or ``Fraction`` where noted).
Nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [matvec(bt, row) for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    # vectors here are mostly sparse
    nz = [j for j, y in enumerate(v) if y]
    return [sum(row[j] * v[j] for j in nz) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def bilinear(gram: Sequence[Sequence], u: Sequence, v: Sequence):
    """Return u^T G v."""
    return dot(u, matvec(gram, v))


def block_diag(*blocks: Sequence[Sequence[int]]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return out


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination (Bareiss)."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
        prev = piv
    return sign * a[n - 1][n - 1]


def rank(m: Sequence[Sequence]) -> int:
    """Rank over the rationals."""
    a = [clear_denominators(r) for r in m]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, rows):
            f = a[i][c]
            if f:
                row = [x * piv - f * y for x, y in zip(a[i], a[r])]
                g = gcd(*row)
                a[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == rows:
            break
    return r


def clear_denominators(v: Sequence) -> list[int]:
    """Scale a rational vector by a positive integer so it becomes primitive integral."""
    fr = [Fraction(x) for x in v]
    d = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * d) for x in fr]
    g = gcd(*ints) if ints else 0
    return [x // g for x in ints] if g > 1 else ints


def inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Rational inverse by Gauss-Jordan elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


# --- Smith and Hermite normal forms -------------------------------------------------


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (s, u, v) with u*m*v == s, s diagonal, d1 | d2 | ... and d_i >= 0.

    u and v are unimodular.
    """
    a = [list(r) for r in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = identity(nr)
    v = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    for t in range(min(nr, nc)):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        clean = False
            if not clean:
                # bring the smallest remainder in row/column t to the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t, nc) if a[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            p = a[t][t]
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return a, u, v


def elementary_divisors(m: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith form (length min(rows, cols), zeros included)."""
    s, _, _ = smith_normal_form(m)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


def integer_kernel(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Rows form a basis of {v in Z^n : m v = 0}; the basis is saturated."""
    if not m:
        return identity(ncols or 0)
    nc = len(m[0])
    s, _, v = smith_normal_form(m)
    r = sum(1 for i in range(min(len(s), nc)) if s[i][i])
    return [[v[i][k] for i in range(nc)] for k in range(r, nc)]


def saturate(rows: Sequence[Sequence[int]], n: int) -> Matrix:
    """Basis of (span_Q rows) intersected with Z^n."""
    if not rows:
        return []
    perp = integer_kernel(rows)
    if not perp:
        return identity(n)
    return integer_kernel(perp)


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style HNF of the row lattice: echelon, positive pivots, reduced above pivots."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    n = len(a[0])
    out: Matrix = []
    pivots: list[int] = []
    for c in range(n):
        live = [r for r in a if r[c]]
        if not live:
            continue
        rest = [r for r in a if not r[c]]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[c] // p[c]
                r = [x - q * y for x, y in zip(r, p)]
                if r[c]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        p = live[0]
        if p[c] < 0:
            p = [-x for x in p]
        out.append(p)
        pivots.append(c)
        a = rest
    # reduce entries above each pivot into [0, pivot)
    for k in range(len(out)):
        c = pivots[k]
        for i in range(k):
            q = out[i][c] // out[k][c]
            if q:
                out[i] = [x - q * y for x, y in zip(out[i], out[k])]
    return out


def same_span(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return hermite_normal_form(a) == hermite_normal_form(b)


def in_span(v: Sequence[int], rows: Sequence[Sequence[int]]) -> bool:
    return same_span(list(rows) + [list(v)], rows)


# --- positive definite forms ---------------------------------------------------------


def ldl(gram: Sequence[Sequence[int]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Rational LDL^T of a positive definite matrix.

    Returns (d, mu) with q(x) = sum_i d[i] * (x_i + sum_{j>i} mu[i][j] x_j)^2.
    Raises ValueError if a pivot is not positive.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d: list[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if a[i][i] <= 0:
            raise ValueError("matrix is not positive definite")
        d.append(a[i][i])
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / a[i][i]
        for j in range(i + 1, n):
            if a[i][j]:
                f = a[i][j] / a[i][i]
                for k in range(j, n):
                    a[j][k] -= f * a[i][k]
                    if k != j:
                        a[k][j] = a[j][k]
    return d, mu


def lll_gram(gram: Sequence[Sequence[int]]) -> Matrix:
    """LLL-reduce a positive definite integral Gram matrix (delta = 3/4).

    Integral variant working on the Gram matrix only. Returns the unimodular
    transformation t (rows = new basis in old coordinates); the reduced Gram
    is t * gram * t^T.
    """
    n = len(gram)
    if n <= 1:
        return identity(n)
    g = [list(r) for r in gram]
    h = identity(n)
    lam = [[0] * n for _ in range(n)]
    d = [0] * (n + 1)  # d[0] = 1, d[i] for 1-based basis index i
    d[0] = 1
    d[1] = g[0][0]

    def redi(k, l):
        # 0-based indices; d index shifts by one
        if 2 * abs(lam[k][l]) <= d[l + 1]:
            return
        q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
        h[k] = [x - q * y for x, y in zip(h[k], h[l])]
        # b_k <- b_k - q b_l in the Gram matrix
        for j in range(n):
            g[k][j] -= q * g[l][j]
        for j in range(n):
            g[j][k] -= q * g[j][l]
        lam[k][l] -= q * d[l + 1]
        for i in range(l):
            lam[k][i] -= q * lam[l][i]

    def swapi(k, kmax):
        h[k], h[k - 1] = h[k - 1], h[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        b = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (b * t + lm * lam[i][k]) // d[k + 1]
        d[k] = b

    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = g[k][j]
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise ValueError("matrix is not positive definite")
                    d[k + 1] = u
        redi(k, k - 1)
        if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
            swapi(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                redi(k, l)
            k += 1
    return h
