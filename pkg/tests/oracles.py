"""Independent reference computations used to cross-check the library.

Nothing here calls the code under test except for plain data constructors.
"""
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np

# (i, j) -> (r, a, delta), reference values for the classification table, entered by hand
REFERENCE_TABLE = {
    (1, 1): (18, 0, 0), (1, 2): (10, 0, 0), (1, 3): (2, 0, 0), (1, 4): (10, 8, 0),
    (2, 1): (19, 1, 1), (2, 2): (11, 1, 1), (2, 3): (3, 1, 1), (2, 4): (11, 9, 1),
    (3, 1): (20, 2, 1), (3, 2): (12, 2, 1), (3, 3): (4, 2, 1), (3, 4): (12, 10, 1),
    (4, 1): (17, 1, 1), (4, 2): (9, 1, 1), (4, 3): (1, 1, 1), (4, 4): (9, 9, 1),
    (5, 1): (18, 2, 1), (5, 2): (10, 2, 1), (5, 3): (2, 2, 1), (5, 4): (10, 10, 1),
    (6, 1): (19, 3, 1), (6, 2): (11, 3, 1), (6, 3): (3, 3, 1), (6, 4): (11, 11, 1),
    (7, 1): (18, 2, 0), (7, 2): (10, 2, 0), (7, 3): (2, 2, 0), (7, 4): (10, 10, 0),
}


def rational_inverse(m):
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c])
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def box_roots(gram, norm=-2):
    return list(_box_roots(tuple(tuple(r) for r in gram), norm))


@lru_cache(maxsize=None)
def _box_roots(gram, norm):
    """All x with x^T G x = norm for negative definite G, by scanning a coordinate box.

    The box uses x_i^2 <= |norm| * (Q^-1)_ii for Q = -G (Cauchy-Schwarz).
    """
    n = len(gram)
    q = [[-x for x in row] for row in gram]
    inv = rational_inverse(q)
    bounds = [isqrt(int(abs(norm) * inv[i][i])) for i in range(n)]
    # small integers are exact in float64, which lets the product use BLAS
    g = np.array(gram, dtype=np.float64)
    axes = [np.arange(-b, b + 1, dtype=np.float64) for b in bounds]
    found = []
    # split off the first coordinate to keep memory small
    if n > 1:
        rest = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, n - 1)
    else:
        rest = np.zeros((1, 0))
    for x0 in axes[0]:
        pts = np.concatenate([np.full((len(rest), 1), x0), rest], axis=1)
        vals = ((pts @ g) * pts).sum(axis=1)
        for row in pts[vals == norm]:
            found.append(tuple(int(t) for t in row))
    return tuple(sorted(found))


def discriminant_by_closure(gram):
    """(order, max element order, delta) of L*/L by closing the dual generators under addition."""
    n = len(gram)
    inv = rational_inverse(gram)
    gens = [tuple(inv[i][k] for i in range(n)) for k in range(n)]

    def red(v):
        return tuple(x - (x.numerator // x.denominator) for x in v)

    seen = {tuple(Fraction(0) for _ in range(n))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = red(tuple(a + b for a, b in zip(v, g)))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    exponent = 1
    for v in seen:
        for x in v:
            exponent = max(exponent, x.denominator)
    delta = 0
    for v in seen:
        q = sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n))
        if q.denominator != 1:
            delta = 1
            break
    return len(seen), exponent, delta


def brute_signature(gram):
    """(n+, n-, n0) from the signs of the eigenvalues, in floating point."""
    ev = np.linalg.eigvalsh(np.array(gram, dtype=float))
    tol = 1e-9
    return int((ev > tol).sum()), int((ev < -tol).sum()), int((abs(ev) <= tol).sum())
