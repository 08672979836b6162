"""LLL reduction and Fincke-Pohst enumeration on exact Gram matrices.

No floating point: Gram-Schmidt data live in Fraction, bounds are compared
exactly. Forms are x -> x^T G x with G symmetric positive definite.
"""

from fractions import Fraction
from math import floor, ceil, isqrt

_DELTA = Fraction(99, 100)


def _gso(G):
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(G[i][j])
            for k in range(j):
                s -= mu[j][k] * mu[i][k] * B[k]
            mu[i][j] = s / B[j]
        s = Fraction(G[i][i])
        for k in range(i):
            s -= mu[i][k] * mu[i][k] * B[k]
        B[i] = s
        if B[i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
    return mu, B


def lll_gram(G):
    """LLL-reduce a Gram matrix. Returns (U, G') with G' = U G U^T."""
    n = len(G)
    G = [[Fraction(x) for x in row] for row in G]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    k = 1
    while k < n:
        mu, B = _gso(G)
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                _apply(G, U, k, j, r)
                mu, B = _gso(G)
        if B[k] >= (_DELTA - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            G[k], G[k - 1] = G[k - 1], G[k]
            for row in G:
                row[k], row[k - 1] = row[k - 1], row[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            k = max(k - 1, 1)
    return U, G


def _apply(G, U, k, j, r):
    n = len(G)
    U[k] = [a - r * b for a, b in zip(U[k], U[j])]
    gkk = G[k][k] - 2 * r * G[k][j] + r * r * G[j][j]
    newk = [G[k][i] - r * G[j][i] for i in range(n)]
    newk[k] = gkk
    G[k] = newk
    for i in range(n):
        G[i][k] = newk[i]


def _cholesky_q(G):
    n = len(G)
    q = [[Fraction(x) for x in row] for row in G]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _isqrt_frac_floor(r):
    # floor(sqrt(r)) for a nonnegative Fraction
    return isqrt(r.numerator // r.denominator) if r >= 0 else -1


def fincke_pohst(G, bound, include_zero=False):
    """All integer vectors x with 0 < x^T G x <= bound (exact), in the given basis."""
    n = len(G)
    bound = Fraction(bound)
    q = _cholesky_q(G)
    out = []
    x = [0] * n

    def rec(i, remaining):
        c = Fraction(0)
        for j in range(i + 1, n):
            c += q[i][j] * x[j]
        r = remaining / q[i][i]
        s = _isqrt_frac_floor(r) + 1
        lo = floor(-c) - s
        hi = ceil(-c) + s
        for v in range(lo, hi + 1):
            t = (v + c) * (v + c) * q[i][i]
            if t > remaining:
                continue
            x[i] = v
            if i == 0:
                if include_zero or any(x):
                    out.append(list(x))
            else:
                rec(i - 1, remaining - t)
        x[i] = 0

    rec(n - 1, bound)
    return out


def quad(G, x):
    n = len(x)
    return sum(G[i][j] * x[i] * x[j] for i in range(n) for j in range(n))


def short_vectors(G, bound, include_zero=False):
    """Vectors of norm <= bound for the form G, after an LLL change of basis.

    Returned in the original coordinates.
    """
    U, Gr = lll_gram(G)
    found = fincke_pohst(Gr, bound, include_zero)
    n = len(G)
    res = []
    for y in found:
        res.append([sum(y[i] * U[i][j] for i in range(n)) for j in range(n)])
    return res
