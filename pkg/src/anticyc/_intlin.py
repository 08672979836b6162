"""Exact integer linear algebra: Hermite forms, modular kernels, rational solves."""

from fractions import Fraction
from math import gcd


def hnf(rows, ncols=None):
    """Row Hermite normal form of the Z-span of `rows`.

    Returns the nonzero rows, upper triangular with positive pivots and
    entries above each pivot reduced into [0, pivot).
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    n = ncols if ncols is not None else len(rows[0])
    out = []
    for col in range(n):
        live = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                if q:
                    r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append((col, piv))
        rows = rest
        if not rows:
            break
    # reduce entries above pivots
    for i in range(len(out)):
        ci, ri = out[i]
        for j in range(i):
            cj, rj = out[j]
            q = rj[ci] // ri[ci]
            if q:
                out[j] = (cj, [a - q * b for a, b in zip(rj, ri)])
    return [r for _, r in out]


def hnf_det(basis):
    """Absolute determinant of a square HNF basis (product of pivots)."""
    d = 1
    for i, r in enumerate(basis):
        d *= r[i]
    return abs(d)


def kernel_mod(forms, moduli, n):
    """Basis of {c in Z^n : f(c) = 0 mod m for each (f, m)}.

    `forms` is a list of length-n integer coefficient lists; `moduli` is a
    matching list of positive integers (or a single integer).
    """
    if isinstance(moduli, int):
        moduli = [moduli] * len(forms)
    k = len(forms)
    if k == 0:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    rows = []
    for i in range(n):
        rows.append([f[i] for f in forms] + [int(i == j) for j in range(n)])
    for t, m in enumerate(moduli):
        rows.append([m if s == t else 0 for s in range(k)] + [0] * n)
    h = hnf(rows, k + n)
    ker = [r[k:] for r in h if not any(r[:k])]
    return hnf(ker, n)


def solve_rational(mat, rhs):
    """Solve x * mat = rhs for a row vector x (mat square, invertible over Q)."""
    n = len(mat)
    # transpose so we solve mat^T x^T = rhs^T
    a = [[Fraction(mat[j][i]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ValueError("singular system")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[i][n] for i in range(n)]


def mat_inverse(mat):
    n = len(mat)
    a = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ValueError("singular matrix")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def det(mat):
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c] != 0:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return d


def content(vec):
    g = 0
    for v in vec:
        g = gcd(g, v)
    return g
