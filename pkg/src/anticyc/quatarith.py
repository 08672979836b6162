"""Definite quaternion algebras over Q: orders, right ideal classes, Brandt
matrices, optimal embeddings and local splittings.

Elements are written in a fixed maximal order O (the "frame"): structure
constants, conjugation and the trace form are integer matrices in that basis,
so lattices are integer Hermite bases over a common denominator.
"""

from fractions import Fraction
from itertools import product
from math import gcd, isqrt

from . import btree
from ._enum import short_vectors
from ._intlin import hnf, hnf_det, kernel_mod, mat_inverse, det
from ._nt import factor, hilbert_symbol, is_prime, kronecker, vp


class NoEmbedding(ValueError):
    pass


class ClassSetError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# the algebra


class QuaternionAlgebra:
    """B = (a, b | Q): i^2 = a, j^2 = b, k = ij."""

    def __init__(self, a, b):
        if a >= 0 or b >= 0:
            raise ValueError("a definite algebra needs a, b < 0")
        self.a, self.b = a, b
        self.ramified = self._ramified_primes()
        d = 1
        for q in self.ramified:
            d *= q
        self.disc = d

    def _ramified_primes(self):
        a, b = self.a, self.b
        bad = set(factor(2 * abs(a) * abs(b)))
        return sorted(q for q in bad if hilbert_symbol(a, b, q) == -1)

    def hilbert(self, q):
        return hilbert_symbol(self.a, self.b, q)

    def mul(self, x, y):
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
                x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
                x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
                x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1)

    @staticmethod
    def conj(x):
        return (x[0], -x[1], -x[2], -x[3])

    @staticmethod
    def trd(x):
        return 2 * x[0]

    def nrd(self, x):
        a, b = self.a, self.b
        return x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3]

    def __repr__(self):
        return f"QuaternionAlgebra({self.a}, {self.b}; disc={self.disc})"


def build_algebra(disc):
    """A definite algebra ramified exactly at infinity and the primes of disc."""
    if disc < 1:
        raise ValueError("disc must be positive")
    f = factor(disc) if disc > 1 else {}
    if any(e > 1 for e in f.values()):
        raise ValueError("disc must be squarefree")
    if len(f) % 2 == 0:
        raise ValueError("a definite algebra over Q needs an odd number of ramified primes")
    target = sorted(f)
    b = -1
    while True:
        for a in range(-1, b - 1, -1):
            B = QuaternionAlgebra(a, b)
            if B.ramified == target:
                return B
        b -= 1


# --------------------------------------------------------------------------
# lattices in a frame


def _frac_vec(v):
    return tuple(Fraction(x) for x in v)


class Frame:
    """Coordinates with respect to a fixed order basis (rows in 1, i, j, k)."""

    def __init__(self, B, basis):
        self.B = B
        self.basis = [_frac_vec(v) for v in basis]
        self._inv = mat_inverse(self.basis)
        n = 4
        self.table = [[self._int(self.from_B(B.mul(self.basis[i], self.basis[j])))
                       for j in range(n)] for i in range(n)]
        self.conj_rows = [self._int(self.from_B(B.conj(v))) for v in self.basis]
        self.trd_vec = [int(B.trd(v)) for v in self.basis]
        self.tform = [[int(B.trd(B.mul(self.basis[i], B.conj(self.basis[j]))))
                       for j in range(n)] for i in range(n)]
        self.one = self._int(self.from_B((1, 0, 0, 0)))

    @staticmethod
    def _int(v):
        if any(Fraction(x).denominator != 1 for x in v):
            raise ValueError("frame basis is not an order")
        return tuple(int(x) for x in v)

    def from_B(self, x):
        x = _frac_vec(x)
        return tuple(sum(x[i] * self._inv[i][j] for i in range(4)) for j in range(4))

    def to_B(self, c):
        return tuple(sum(Fraction(c[i]) * self.basis[i][j] for i in range(4)) for j in range(4))

    def mul(self, x, y):
        out = [0, 0, 0, 0]
        t = self.table
        for i in range(4):
            xi = x[i]
            if not xi:
                continue
            for j in range(4):
                yj = y[j]
                if not yj:
                    continue
                c = xi * yj
                r = t[i][j]
                out[0] += c * r[0]
                out[1] += c * r[1]
                out[2] += c * r[2]
                out[3] += c * r[3]
        return tuple(out)

    def conj(self, x):
        out = [0, 0, 0, 0]
        for i in range(4):
            if x[i]:
                r = self.conj_rows[i]
                for j in range(4):
                    out[j] += x[i] * r[j]
        return tuple(out)

    def trd(self, x):
        return sum(x[i] * self.trd_vec[i] for i in range(4))

    def nrd(self, x):
        T = self.tform
        s = 0
        for i in range(4):
            if x[i]:
                s += x[i] * sum(T[i][j] * x[j] for j in range(4))
        return s / 2 if isinstance(s, Fraction) else Fraction(s, 2)

    def bilinear(self, x, y):
        """trd(x conj(y))."""
        T = self.tform
        return sum(x[i] * T[i][j] * y[j] for i in range(4) for j in range(4))


class Lattice:
    """(1/den) * Z-span(rows), rows an integer Hermite basis in frame coordinates."""

    __slots__ = ("rows", "den")

    def __init__(self, rows, den=1):
        self.rows = rows
        self.den = den

    @classmethod
    def span(cls, vecs):
        vecs = [tuple(Fraction(x) for x in v) for v in vecs]
        d = 1
        for v in vecs:
            for x in v:
                d = d * x.denominator // gcd(d, x.denominator)
        rows = hnf([[int(x * d) for x in v] for v in vecs], 4)
        g = 0
        for r in rows:
            for x in r:
                g = gcd(g, x)
        g = gcd(g, d)
        if g > 1:
            rows = [[x // g for x in r] for r in rows]
            d //= g
        return cls(tuple(tuple(r) for r in rows), d)

    @classmethod
    def span_int(cls, vecs, den=1):
        rows = hnf([list(v) for v in vecs], 4)
        g = den
        for r in rows:
            for x in r:
                g = gcd(g, x)
        if g > 1:
            rows = [[x // g for x in r] for r in rows]
            den //= g
        return cls(tuple(tuple(r) for r in rows), den)

    def key(self):
        return (self.rows, self.den)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def basis(self):
        return [tuple(Fraction(x, self.den) for x in r) for r in self.rows]

    def rank(self):
        return len(self.rows)

    def covolume(self):
        return Fraction(hnf_det(self.rows), self.den ** 4)

    def coords(self, x):
        """Coordinates of x (frame coords) in this lattice basis, as Fractions."""
        inv = mat_inverse([[Fraction(v, self.den) for v in r] for r in self.rows])
        x = [Fraction(v) for v in x]
        return [sum(x[i] * inv[i][j] for i in range(4)) for j in range(4)]

    def contains(self, x):
        return all(c.denominator == 1 for c in self.coords(x))

    def contains_lattice(self, other):
        return all(self.contains(v) for v in other.basis())

    def scale(self, q):
        q = Fraction(q)
        return Lattice.span([tuple(x * q for x in v) for v in self.basis()])

    def __repr__(self):
        return f"Lattice(rows={self.rows}, den={self.den})"


def lattice_product(frame, I, J):
    gens = [frame.mul(x, y) for x in I.rows for y in J.rows]
    return Lattice.span_int(gens, I.den * J.den)


def lattice_conj(frame, I):
    return Lattice.span_int([frame.conj(x) for x in I.rows], I.den)


def lattice_norm(frame, I):
    """gcd of reduced norms on I (the reduced norm of an invertible ideal)."""
    vals = [Fraction(frame.bilinear(x, x), 2) for x in I.rows]
    n = len(I.rows)
    vals += [Fraction(frame.bilinear(I.rows[i], I.rows[j]))
             for i in range(n) for j in range(i + 1, n)]
    num = 0
    dd = 1
    for v in vals:
        dd = dd * v.denominator // gcd(dd, v.denominator)
    for v in vals:
        num = gcd(num, int(v * dd))
    return Fraction(num, dd * I.den * I.den)


def gram(frame, I):
    """Gram matrix of nrd on I: nrd(sum c_i b_i) = c^T G c."""
    n = len(I.rows)
    d2 = 2 * I.den * I.den
    return [[Fraction(frame.bilinear(I.rows[i], I.rows[j]), d2) for j in range(n)]
            for i in range(n)]


def elements_of_norm(frame, I, target, upto=False):
    """Elements x of I with nrd(x) == target (or <= target), frame coordinates."""
    G = gram(frame, I)
    n = len(I.rows)
    out = []
    for c in short_vectors(G, target):
        x = tuple(Fraction(sum(c[i] * I.rows[i][j] for i in range(n)), I.den) for j in range(4))
        if upto or frame.nrd(x) == target:
            out.append(x)
    return out


def reduced_discriminant(frame, L):
    """sqrt |det trd(b_i b_j)| for a rank-4 lattice."""
    bs = L.basis()
    m = [[frame.trd(frame.mul(x, y)) for y in bs] for x in bs]
    d = abs(det(m))
    r = Fraction(isqrt(d.numerator), isqrt(d.denominator))
    if r * r != d:
        raise ValueError("discriminant is not a square")
    return r


# --------------------------------------------------------------------------
# orders


class QuatOrder:
    def __init__(self, frame, lattice, level=1, name=""):
        self.frame = frame
        self.lattice = lattice
        self.level = level
        self.name = name

    @property
    def B(self):
        return self.frame.B

    def basis(self):
        return self.lattice.basis()

    def is_order(self):
        bs = self.basis()
        if not self.lattice.contains(self.frame.one):
            return False
        return all(self.lattice.contains(self.frame.mul(x, y)) for x in bs for y in bs)

    def discriminant(self):
        return reduced_discriminant(self.frame, self.lattice)

    def contains(self, x):
        return self.lattice.contains(x)

    def unit_count(self):
        return len(elements_of_norm(self.frame, self.lattice, 1))

    def __repr__(self):
        return f"QuatOrder(level={self.level}, disc={self.discriminant()})"


def _ring_closure(B, gens, bound):
    """Z-span closed under multiplication, or None if it stops being integral."""
    L = _span_B(gens)
    while True:
        bs = L
        new = list(bs)
        for x in bs:
            for y in bs:
                new.append(B.mul(x, y))
        for v in new:
            if Fraction(B.trd(v)).denominator != 1 or Fraction(B.nrd(v)).denominator != 1:
                return None
        L2 = _span_B(new)
        if L2 == L:
            return L
        if abs(det(L2)) < Fraction(1, bound):
            return None
        L = L2


def _span_B(vecs):
    lat = Lattice.span(vecs)
    return [tuple(Fraction(x, lat.den) for x in r) for r in lat.rows]


def _disc_B(B, basis):
    m = [[B.trd(B.mul(x, y)) for y in basis] for x in basis]
    d = abs(det(m))
    r = isqrt(d.numerator)
    assert r * r == d.numerator and d.denominator == 1
    return r


def maximal_order(B):
    """A maximal order containing Z<1, i, j, k>, by local enlargement."""
    basis = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    basis = [_frac_vec(v) for v in basis]
    d = _disc_B(B, basis)
    while d != B.disc:
        extra = d // B.disc
        grown = None
        for q in sorted(factor(extra)):
            for c in product(range(q), repeat=4):
                if not any(c):
                    continue
                x = tuple(sum(Fraction(c[i], q) * basis[i][j] for i in range(4)) for j in range(4))
                if Fraction(B.trd(x)).denominator != 1 or Fraction(B.nrd(x)).denominator != 1:
                    continue
                L = _ring_closure(B, basis + [x], d * d)
                if L is not None and len(L) == 4:
                    nd = _disc_B(B, L)
                    if nd < d:
                        grown = (L, nd)
                        break
            if grown:
                break
        if grown is None:
            raise ClassSetError("could not enlarge order to a maximal one")
        basis, d = grown
    frame = Frame(B, basis)
    lat = Lattice(tuple(tuple(int(i == j) for j in range(4)) for i in range(4)), 1)
    O = QuatOrder(frame, lat, 1, "maximal")
    if O.discriminant() != B.disc:
        raise ClassSetError("maximal order discriminant certification failed")
    return O


def _right_mult_matrix(frame, z):
    # rows: images of basis vectors under x -> x z
    return [frame.mul(tuple(int(i == j) for j in range(4)), z) for i in range(4)]


def _nilpotent_candidates(frame, O, ell):
    bs = [tuple(r) for r in O.lattice.rows]
    for c in product(range(ell), repeat=4):
        if not any(c):
            continue
        z = tuple(sum(c[i] * bs[i][j] for i in range(4)) for j in range(4))
        if frame.trd(z) % ell == 0 and frame.nrd(z) % ell == 0:
            yield z


def _borel_forms(frame, z, ell):
    """Linear forms in frame coordinates cutting out {x : x z in F_ell z mod ell}."""
    rm = _right_mult_matrix(frame, z)
    forms = []
    for s in range(4):
        for t in range(s + 1, 4):
            forms.append([(rm[i][s] * z[t] - rm[i][t] * z[s]) % ell for i in range(4)])
    return forms


def eichler_order(O, level, omega=None):
    """The Eichler order of the given squarefree level inside the maximal order O.

    When `omega` (frame coordinates of an element of O) is given, the local
    Borel conditions are chosen so the order contains it.
    """
    frame = O.frame
    f = factor(level) if level > 1 else {}
    if any(e > 1 for e in f.values()):
        raise ValueError("level must be squarefree")
    if any(O.B.disc % q == 0 for q in f):
        raise ValueError("level must be coprime to the discriminant")
    forms, mods, data = [], [], {}
    for ell in sorted(f):
        chosen = None
        for z in _nilpotent_candidates(frame, O, ell):
            fs = _borel_forms(frame, z, ell)
            if omega is None or all(sum(a * b for a, b in zip(fm, omega)) % ell == 0 for fm in fs):
                chosen = (z, fs)
                break
        if chosen is None:
            raise NoEmbedding(f"no Borel condition at {ell} compatible with the embedding")
        data[ell] = chosen[0]
        forms += chosen[1]
        mods += [ell] * len(chosen[1])
    # coordinates relative to O's basis: x = c * O.rows
    orows = O.lattice.rows
    cforms = [[sum(fm[j] * orows[i][j] for j in range(4)) for i in range(4)] for fm in forms]
    ker = kernel_mod(cforms, mods, 4)
    gens = [tuple(sum(k[i] * orows[i][j] for i in range(4)) for j in range(4)) for k in ker]
    R = QuatOrder(frame, Lattice.span_int(gens, O.lattice.den), level, "eichler")
    R.maximal = O
    R.nilpotents = data
    if not R.is_order():
        raise ClassSetError("Eichler construction is not closed under multiplication")
    if R.discriminant() != O.B.disc * level:
        raise ClassSetError("Eichler order discriminant certification failed")
    R.overorders = {ell: _second_maximal(O, R, ell, data[ell]) for ell in data}
    return R


def _second_maximal(O, R, ell, z):
    """The right order of the left O-ideal O z + ell O: the other maximal order over R."""
    frame = O.frame
    bs = [tuple(r) for r in O.lattice.rows]
    J = Lattice.span_int([frame.mul(x, z) for x in bs] + [tuple(ell * t for t in x) for x in bs])
    # right order {x : J x in J} = conj(J) J / nrd(J)
    n = lattice_norm(frame, J)
    P = lattice_product(frame, lattice_conj(frame, J), J)
    O2 = QuatOrder(frame, P.scale(1 / n), 1, "maximal'")
    if not O2.is_order() or O2.discriminant() != O.B.disc:
        raise ClassSetError("second maximal order certification failed")
    both = all(O.contains(x) and O2.contains(x) for x in R.basis())
    if not both:
        raise ClassSetError("Eichler order not contained in both maximal orders")
    return O2


# --------------------------------------------------------------------------
# ideals


class RightIdeal:
    def __init__(self, order, lattice):
        self.order = order
        self.lattice = lattice
        self._norm = None

    @property
    def frame(self):
        return self.order.frame

    def norm(self):
        if self._norm is None:
            self._norm = lattice_norm(self.frame, self.lattice)
        return self._norm

    def left_order(self):
        fr = self.frame
        P = lattice_product(fr, self.lattice, lattice_conj(fr, self.lattice))
        return QuatOrder(fr, P.scale(1 / self.norm()), self.order.level, "left")

    def right_order_ok(self):
        fr = self.frame
        return all(self.lattice.contains(fr.mul(x, r))
                   for x in self.lattice.basis() for r in self.order.basis())

    def __eq__(self, other):
        return isinstance(other, RightIdeal) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"RightIdeal(norm={self.norm()}, {self.lattice})"


def unit_ideal(R):
    return RightIdeal(R, R.lattice)


def principal_right_ideal(R, x):
    fr = R.frame
    return RightIdeal(R, Lattice.span([fr.mul(x, r) for r in R.basis()]))


def left_multiply(R, elements, I):
    """The right ideal generated by the products e * I for e in elements."""
    fr = R.frame
    gens = [fr.mul(e, x) for e in elements for x in I.lattice.basis()]
    return RightIdeal(R, Lattice.span(gens))


def is_equivalent(I, J):
    """(True, witness) when I = w J for some w in B^x, else (False, None).

    Decided by searching I * conj(J) for an element of reduced norm
    nrd(I) nrd(J); the witness is that element divided by nrd(J).
    """
    fr = I.frame
    P = lattice_product(fr, I.lattice, lattice_conj(fr, J.lattice))
    t = I.norm() * J.norm()
    for x in elements_of_norm(fr, P, t):
        w = tuple(v / J.norm() for v in x)
        return True, w
    return False, None


# --------------------------------------------------------------------------
# local splitting


class LocalSplitting:
    """B_ell -> M_2(Z/ell^M) on the maximal frame order, optionally with the
    image of omega put in the btree model form (basis (v, omega v))."""

    def __init__(self, O, ell, M, omega=None):
        if O.B.disc % ell == 0:
            raise ValueError("ell divides the discriminant")
        if ell == 2:
            raise ValueError("ell must be odd")
        self.O = O
        self.frame = fr = O.frame
        self.ell = ell
        self.M = M
        self.mod = P = ell ** M
        e = self._idempotent()
        obasis = [tuple(r) for r in O.lattice.rows]
        assert O.lattice.den == 1
        V = [tuple(t % P for t in fr.mul(o, e)) for o in obasis]
        if omega is not None:
            cands = V + [tuple((x + y) % P for x, y in zip(V[i], V[j]))
                         for i in range(4) for j in range(i + 1, 4)]
            pair = None
            for v in cands:
                w = tuple(t % P for t in fr.mul(omega, v))
                if self._independent(v, w):
                    pair = (v, w)
                    break
            if pair is None:
                raise ValueError("no omega-cyclic vector found")
        else:
            pair = None
            for i in range(4):
                for j in range(i + 1, 4):
                    if self._independent(V[i], V[j]):
                        pair = (V[i], V[j])
                        break
                if pair:
                    break
        self.v1, self.v2 = pair
        self._rows = self._minor_rows()
        self.mats = [self._act(o) for o in self._frame_units()]

    def _frame_units(self):
        return [tuple(int(i == j) for j in range(4)) for i in range(4)]

    def _independent(self, v, w):
        l = self.ell
        return any((v[s] * w[t] - v[t] * w[s]) % l for s in range(4) for t in range(s + 1, 4))

    def _minor_rows(self):
        l = self.ell
        v, w = self.v1, self.v2
        for s in range(4):
            for t in range(s + 1, 4):
                d = v[s] * w[t] - v[t] * w[s]
                if d % l:
                    return s, t, pow(d, -1, self.mod)
        raise AssertionError("basis vectors dependent")

    def _coords(self, u):
        s, t, dinv = self._rows
        v, w = self.v1, self.v2
        P = self.mod
        # solve alpha v + beta w = u on rows s, t
        alpha = (u[s] * w[t] - u[t] * w[s]) * dinv % P
        beta = (v[s] * u[t] - v[t] * u[s]) * dinv % P
        return alpha, beta

    def _act(self, x):
        fr = self.frame
        P = self.mod
        c1 = self._coords(tuple(t % P for t in fr.mul(x, self.v1)))
        c2 = self._coords(tuple(t % P for t in fr.mul(x, self.v2)))
        return ((c1[0], c2[0]), (c1[1], c2[1]))

    def _idempotent(self):
        fr = self.frame
        l, P = self.ell, self.mod
        bs = [tuple(r) for r in self.O.lattice.rows]
        for c in product(range(-2, 3), repeat=4):
            u = tuple(sum(c[i] * bs[i][j] for i in range(4)) for j in range(4))
            t = fr.trd(u)
            n = int(fr.nrd(u))
            disc = (t * t - 4 * n) % l
            if disc == 0 or pow(disc, (l - 1) // 2, l) != 1:
                continue
            from ._nt import sqrt_mod_prime
            r = sqrt_mod_prime(disc, l)
            inv2 = pow(2, -1, l)
            lam, lam2 = (t + r) * inv2 % l, (t - r) * inv2 % l
            # e = (u - lam2) / (lam - lam2)
            k = pow(lam - lam2, -1, l)
            e = tuple(((u[j] - lam2 * fr.one[j]) * k) % P for j in range(4))
            # lift: e <- 3e^2 - 2e^3
            prec = 1
            while prec < self.M:
                e2 = fr.mul(e, e)
                e3 = fr.mul(e2, e)
                e = tuple((3 * a - 2 * b) % P for a, b in zip(e2, e3))
                prec *= 2
            e2 = tuple(x % P for x in fr.mul(e, e))
            assert e2 == e
            return e
        raise ValueError("no split semisimple element found")  # pragma: no cover

    def __call__(self, x):
        """Matrix of x (frame coordinates, ell-integral) mod ell^M."""
        P = self.mod
        xs = []
        for t in x:
            t = Fraction(t)
            if t.denominator % self.ell == 0:
                raise ValueError("element is not ell-integral")
            xs.append(t.numerator * pow(t.denominator, -1, P) % P)
        m = [[0, 0], [0, 0]]
        for c, A in zip(xs, self.mats):
            if c:
                for r in range(2):
                    for s in range(2):
                        m[r][s] += c * A[r][s]
        return tuple(tuple(v % P for v in row) for row in m)


def local_splitting(R, p, precision, omega=None, dK=None):
    """Splitting of B at p carrying the maximal order over R onto M_2(Z_p).

    Returns (split, base) where base is the list of standard lattices whose
    common stabilizer is R_p: [Z_p^2] when p does not divide the level, and
    [Z_p^2, Lambda_1] for the Eichler level p case.
    """
    if R.B.disc % p == 0:
        raise ValueError("p divides the discriminant")
    O = getattr(R, "maximal", R)
    S = LocalSplitting(O, p, precision, omega)
    ctx = btree.LocalContext(p, dK, n_max=max(1, precision // 2 - 2), precision=precision)
    base = [btree.identity_lattice(ctx)]
    if R.level % p == 0:
        mats = [S(r) for r in R.basis()]
        good = []
        for L in btree.neighbours(ctx, base[0], "lower"):
            if all(_stabilizes(ctx, m, L) for m in mats):
                good.append(L)
        if len(good) != 1:
            raise ClassSetError("Eichler order at p does not fix a unique sublattice")
        base.append(good[0])
    return S, base, ctx


def _stabilizes(ctx, m, L):
    return all(L.contains_vector(_mv(m, col), L.shift) for col in L.columns())


def _mv(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def ideal_local_lattices(S, ctx, I, base):
    """The lattices I_p * Lambda for Lambda in base."""
    out = []
    p = S.ell
    k = vp(I.lattice.den, p) if I.lattice.den % p == 0 else 0
    for Lam in base:
        gens = []
        for r in I.lattice.rows:
            x = tuple(Fraction(t * p ** k, I.lattice.den) for t in r)
            m = S(x)
            for col in Lam.columns():
                gens.append(_mv(m, col))
        out.append(btree.lattice_from_generators(ctx, gens, Lam.shift - k))
    return out


def restrict_at_p(S, ctx, I, base, targets):
    """The right ideal equal to I away from p and to b R_p at p, where b maps
    the base lattices to the targets.  Targets are rescaled by a power of p
    (which does not change the ideal class) to sit inside I_p * base.
    """
    p = S.ell
    cur = ideal_local_lattices(S, ctx, I, base)
    k = 0
    while not all(c.contains(t.scale(k)) for c, t in zip(cur, targets)):
        k += 1
        if k > ctx.M:
            raise btree.PrecisionExhausted("target lattices do not fit")
    targets = [t.scale(k) for t in targets]
    if vp(I.lattice.den, p) if I.lattice.den % p == 0 else 0:
        raise ValueError("ideal must be p-integral in frame coordinates")
    forms, mods = [], []
    rows = I.lattice.rows
    uinv = pow(I.lattice.den, -1, S.mod)
    mats = [S(tuple(Fraction(t) * uinv for t in r)) for r in rows]
    for Lam, T in zip(base, targets):
        e = Lam.shift - T.shift
        for col in Lam.columns():
            # w_r = p^e * mats[r] col
            ws = [_mv(m, col) for m in mats]
            a, c, b = T.a, T.c, T.b
            extra = -e if e < 0 else 0
            scale = p ** e if e > 0 else 1
            f1 = [w[1] * scale for w in ws]
            f2 = [(p ** c * w[0] - b * w[1]) * scale for w in ws]
            forms.append(f1)
            mods.append(p ** (c + extra))
            forms.append(f2)
            mods.append(p ** (a + c + extra))
    if max(mods) > S.mod:
        raise btree.PrecisionExhausted("splitting precision too small for these lattices")
    ker = kernel_mod(forms, mods, len(rows))
    gens = [tuple(sum(kv[i] * rows[i][j] for i in range(len(rows))) for j in range(4)) for kv in ker]
    return RightIdeal(I.order, Lattice.span_int(gens, I.lattice.den))


# --------------------------------------------------------------------------
# class sets and Brandt matrices


def eichler_mass(disc, level):
    """Sum over classes of 1/#(O_i^x / {+-1})."""
    m = Fraction(1, 12)
    for q in factor(disc) if disc > 1 else {}:
        m *= q - 1
    for ell in factor(level) if level > 1 else {}:
        m *= ell + 1
    return m


class IdealClassSet:
    def __init__(self, order, reps, weights):
        self.order = order
        self.reps = reps
        self.weights = weights
        self._cache = {}

    def __len__(self):
        return len(self.reps)

    def mass(self):
        return sum(Fraction(1, w) for w in self.weights)

    def classify(self, J):
        """Index of the representative equivalent to J."""
        if J.order.frame is not self.order.frame or J.order.lattice != self.order.lattice:
            raise ClassSetError("ideal belongs to a different order")
        key = J.lattice
        if key in self._cache:
            return self._cache[key]
        for i, I in enumerate(self.reps):
            ok, _ = is_equivalent(J, I)
            if ok:
                self._cache[key] = i
                return i
        raise ClassSetError("ideal not equivalent to any representative")


def neighbour_ideals(R, I, ell, split=None):
    """The ell+1 right ideals J inside I with nrd(J) = ell nrd(I)."""
    if split is None:
        split = neighbour_splitting(R, ell)
    S, base, ctx = split
    cur = ideal_local_lattices(S, ctx, I, base)[0]
    out = []
    for L in btree.neighbours(ctx, cur, "lower"):
        out.append(restrict_at_p(S, ctx, I, base, [L]))
    return out


_SPLIT_CACHE = {}


def neighbour_splitting(R, ell):
    key = (id(R), ell)
    if key not in _SPLIT_CACHE:
        O = getattr(R, "maximal", R)
        S = LocalSplitting(O, ell, 8)
        ctx = btree.LocalContext(ell, None, n_max=2, precision=8)
        _SPLIT_CACHE[key] = (S, [btree.identity_lattice(ctx)], ctx)
    return _SPLIT_CACHE[key]


def _aux_prime(R):
    N = R.B.disc * R.level
    ell = 3
    while N % ell == 0 or not is_prime(ell):
        ell += 2
    return ell


def right_ideal_class_set(R, max_steps=10000):
    """Representatives of the right ideal classes, by neighbour expansion
    until the Eichler mass is saturated."""
    target = eichler_mass(R.B.disc, R.level)
    ell = _aux_prime(R)
    start = unit_ideal(R)
    reps = [start]
    weights = [_weight(start)]
    cs = IdealClassSet(R, reps, weights)
    queue = [start]
    steps = 0
    while cs.mass() < target:
        if not queue or steps > max_steps:
            raise ClassSetError(f"mass not saturated: {cs.mass()} < {target}")
        I = queue.pop(0)
        for J in neighbour_ideals(R, I, ell):
            steps += 1
            if any(is_equivalent(J, K)[0] for K in reps):
                continue
            reps.append(J)
            weights.append(_weight(J))
            queue.append(J)
            if cs.mass() >= target:
                break
    if cs.mass() != target:
        raise ClassSetError(f"mass overshoot: {cs.mass()} vs {target}")
    return cs


def _weight(I):
    n = I.left_order().unit_count()
    return n // 2


def brandt_matrix(cs, ell):
    """B[i][j] = number of ell-neighbours of rep i in class j."""
    R = cs.order
    if (R.B.disc * R.level) % ell == 0:
        raise ValueError("ell must be coprime to disc * level")
    if ell == 2:
        return _brandt_two(cs)
    split = neighbour_splitting(R, ell)
    h = len(cs)
    mat = [[0] * h for _ in range(h)]
    for i, I in enumerate(cs.reps):
        for J in neighbour_ideals(R, I, ell, split):
            mat[i][cs.classify(J)] += 1
    return mat


def _brandt_two(cs):
    """ell = 2 neighbours, found as the right ideals x R + 2 I of norm 2 nrd(I)."""
    R = cs.order
    fr = R.frame
    h = len(cs)
    mat = [[0] * h for _ in range(h)]
    for i, I in enumerate(cs.reps):
        n = I.norm()
        seen = set()
        two_I = [tuple(2 * t for t in x) for x in I.lattice.basis()]
        for c in product(range(2), repeat=4):
            if not any(c):
                continue
            x = tuple(sum(c[k] * I.lattice.basis()[k][j] for k in range(4)) for j in range(4))
            if (fr.nrd(x) / n) % 2:
                continue
            gens = [fr.mul(x, r) for r in R.basis()] + two_I
            J = RightIdeal(R, Lattice.span(gens))
            if J.norm() != 2 * n or J.lattice in seen:
                continue
            seen.add(J.lattice)
            mat[i][cs.classify(J)] += 1
    return mat


# --------------------------------------------------------------------------
# embeddings


class OptimalEmbedding:
    def __init__(self, order, dK, q):
        self.order = order
        self.dK = dK
        self.q = q

    @property
    def frame(self):
        return self.order.frame

    def image(self, g):
        """Frame coordinates of x + y*omega."""
        x, y = g
        one = self.frame.one
        return tuple(x * one[j] + y * self.q[j] for j in range(4))

    def conductor_in(self, lattice):
        """Conductor of K intersected with an order given as a lattice."""
        cs = lattice.coords(self.q)
        c = 1
        for t in cs:
            c = c * t.denominator // gcd(c, t.denominator)
        return c

    def __repr__(self):
        return f"OptimalEmbedding(dK={self.dK}, q={self.q})"


def embedding_obstruction(disc, level, dK):
    """None when an optimal embedding of O_K into an Eichler order exists, else
    the offending prime."""
    for ell in factor(level) if level > 1 else {}:
        if kronecker(dK, ell) != 1:
            return ell
    for q in factor(disc) if disc > 1 else {}:
        if kronecker(dK, q) == 1:
            return q
    return None


def optimal_embedding(R, dK):
    bad = embedding_obstruction(R.B.disc, R.level, dK)
    if bad is not None:
        raise NoEmbedding(f"no optimal embedding: the prime {bad} has the wrong splitting in K")
    fr = R.frame
    N = (dK * dK - dK) // 4
    # s = 2x - trd(x) runs over a rank-3 lattice of pure quaternions
    pure = Lattice.span([tuple(2 * t - fr.trd(x) * fr.one[j] for j, t in enumerate(x))
                         for x in R.basis()])
    for s in elements_of_norm(fr, pure, -dK):
        x = tuple((t + dK * fr.one[j]) / 2 for j, t in enumerate(s))
        if R.contains(x) and fr.trd(x) == dK and fr.nrd(x) == N:
            q = tuple(int(t) for t in x)
            emb = OptimalEmbedding(R, dK, q)
            if emb.conductor_in(R.lattice) != 1:
                continue
            return emb
    raise NoEmbedding("no embedding found by enumeration")
