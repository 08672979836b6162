"""Ring class groups of imaginary quadratic orders O_{p^n} = Z + p^n O_K.

Classes are reduced primitive binary quadratic forms (a, b, c) of
discriminant p^(2n) dK.  An O_K-ideal [m, s + omega] of norm m prime to the
conductor f corresponds to the form with b = -f(2s + dK) mod 2m, and this is
the bridge used both for the tower maps and for acting on quaternion ideals.

Normalization: an idele generating the ideal a acts as the class of a, and a
local unit gamma at p is identified with the class of the principal ideal
(conj(g)) for a global g close to gamma (see kernel_class_of_unit).
"""

from fractions import Fraction
from math import gcd, isqrt

from ._nt import factor, is_fundamental_discriminant, is_prime, kronecker, sqrt_mod_prime


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


# --------------------------------------------------------------------------
# forms


def reduce_form(f):
    a, b, c = f
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # b -> b mod 2a in (-a, a]
            k = (a - b) // (2 * a)
            b2 = b + 2 * a * k
            c = c + k * b + k * k * a
            b = b2
            continue
        break
    if a == c and b < 0:
        b = -b
    return (a, b, c)


def is_reduced(f):
    a, b, c = f
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def form_disc(f):
    a, b, c = f
    return b * b - 4 * a * c


def reduced_forms(D):
    """All reduced primitive forms of negative discriminant D."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or gcd(gcd(a, b), c) != 1:
                continue
            f = (a, b, c)
            if is_reduced(f):
                out.append(f)
        a += 1
    return sorted(out)


def compose_forms(f1, f2):
    """Dirichlet composition of primitive forms of equal discriminant, reduced."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    D = b1 * b1 - 4 * a1 * c1
    if b2 * b2 - 4 * a2 * c2 != D:
        raise ValueError("discriminants differ")
    h = (b1 + b2) // 2
    g1, u1, v1 = _xgcd(a1, a2)
    e, u2, w = _xgcd(g1, h)
    u, v = u2 * u1, u2 * v1
    A = a1 * a2 // (e * e)
    B = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2) // e
    B %= 2 * A
    C = (B * B - D) // (4 * A)
    assert B * B - 4 * A * C == D
    return reduce_form((A, B, C))


def inverse_form(f):
    return reduce_form((f[0], -f[1], f[2]))


def principal_form(D):
    return reduce_form((1, D % 2, (D % 2 - D) // 4))


def form_value(f, x, y):
    a, b, c = f
    return a * x * x + b * x * y + c * y * y


def transform_to_first_coefficient(f, x, y):
    """An equivalent form whose first coefficient is f(x, y), for coprime x, y."""
    g, w, mz = _xgcd(x, y)
    if g != 1:
        raise ValueError("x, y must be coprime")
    z = -mz
    # matrix [[x, z], [y, w]] has determinant x w - y z = 1
    a, b, c = f
    A = form_value(f, x, y)
    Bq = 2 * a * x * z + b * (x * w + y * z) + 2 * c * y * w
    C = form_value(f, z, w)
    return (A, Bq, C)


# --------------------------------------------------------------------------
# ideals of O_K and their forms


def omega_data(dK):
    T = dK
    N = (dK * dK - dK) // 4
    return T, N


def k_norm(dK, g):
    T, N = omega_data(dK)
    x, y = g
    return x * x + T * x * y + N * y * y


def k_conj(dK, g):
    x, y = g
    return (x + y * dK, -y)


def k_mul(dK, g, h):
    T, N = omega_data(dK)
    x1, y1 = g
    x2, y2 = h
    return (x1 * x2 - N * y1 * y2, x1 * y2 + x2 * y1 + T * y1 * y2)


def ideal_from_form(dK, f, cond):
    """The O_K-ideal [a, s + omega] of the form (a, b, c), gcd(a, cond) = 1."""
    a, b, c = f
    if gcd(a, cond) != 1:
        raise ValueError("first coefficient must be prime to the conductor")
    u = (-b - cond * dK) // 2
    s = u * pow(cond, -1, a) % a if a > 1 else 0
    return (a, s)


def form_from_ideal(dK, ideal, cond):
    """Reduced form of discriminant cond^2 dK for the O_K-ideal [m, s + omega]."""
    m, s = ideal
    D = cond * cond * dK
    b = (-cond * (2 * s + dK)) % (2 * m)
    if (b * b - D) % (4 * m):
        raise ValueError("not an ideal of norm m")
    return reduce_form((m, b, (b * b - D) // (4 * m)))


def principal_ideal_hnf(dK, g):
    """(d, m, s) with (g) = d [m, s + omega]."""
    T, N = omega_data(dK)
    # Z-basis of (g): g, g*omega in coordinates (1, omega)
    x, y = g
    v1 = (x, y)
    v2 = k_mul(dK, g, (0, 1))
    # HNF over columns: second coordinates first
    gy, p1, q1 = _xgcd(v1[1], v2[1])
    if gy < 0:
        gy, p1, q1 = -gy, -p1, -q1
    r1 = (p1 * v1[0] + q1 * v2[0], gy)
    # the other combination has zero omega-coordinate
    k1, k2 = v2[1] // gy, v1[1] // gy
    r0 = abs(k1 * v1[0] - k2 * v2[0])
    # ideal = Z r0 + Z (r1x + gy omega), so d = gy and m = r0 / gy
    d = gy
    m = r0 // d
    s = (r1[0] // d) % m if m > 1 else 0
    assert r0 % d == 0 and r1[0] % d == 0
    return d, m, s


# --------------------------------------------------------------------------
# groups


class QuadOrderGlobal:
    def __init__(self, dK, c=1):
        if not is_fundamental_discriminant(dK) or dK >= 0:
            raise ValueError("dK must be a negative fundamental discriminant")
        if dK in (-3, -4):
            raise ValueError("dK = -3, -4 have extra units")
        self.dK = dK
        self.c = c

    @property
    def disc(self):
        return self.c * self.c * self.dK


def class_number_formula(dK, p, n):
    h0 = len(reduced_forms(dK))
    if n == 0:
        return h0
    return h0 * p ** (n - 1) * (p - kronecker(dK, p))


class RingClassGroup:
    """Pic(O_{p^n}) as reduced forms, with lazily cached composition."""

    def __init__(self, dK, p, n, avoid=1):
        if p == 2 or not is_prime(p):
            raise ValueError("p must be an odd prime")
        if dK % p == 0:
            raise ValueError("p must not divide dK")
        QuadOrderGlobal(dK)
        self.dK, self.p, self.n = dK, p, n
        self.cond = p ** n
        self.D = self.cond ** 2 * dK
        self.avoid = avoid
        self.elements = reduced_forms(self.D)
        self.index = {f: i for i, f in enumerate(self.elements)}
        self.identity = principal_form(self.D)
        self._mul = {}
        self._reps = {}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def mul(self, f, g):
        key = (f, g) if f <= g else (g, f)
        r = self._mul.get(key)
        if r is None:
            r = compose_forms(f, g)
            self._mul[key] = r
        return r

    def inv(self, f):
        return inverse_form(f)

    def power(self, f, k):
        r = self.identity
        if k < 0:
            f, k = self.inv(f), -k
        while k:
            if k & 1:
                r = self.mul(r, f)
            f = self.mul(f, f)
            k >>= 1
        return r

    def order_of(self, f):
        k, g = 1, f
        while g != self.identity:
            g = self.mul(g, f)
            k += 1
        return k

    def exponent(self):
        e = 1
        for f in self.elements:
            o = self.order_of(f)
            e = e * o // gcd(e, o)
        return e

    def label(self, f):
        return "%d,%d,%d" % f

    def ideal_rep(self, f):
        """(m, s): a prime O_K-ideal [m, s + omega] in the class f, with m split
        and prime to p, dK and the avoid-modulus."""
        hit = self._reps.get(f)
        if hit is not None:
            return hit
        bad = self.p * abs(self.dK) * self.avoid
        best = None
        R = 1
        while best is None:
            R *= 2
            for x in range(-R, R + 1):
                for y in range(0, R + 1):
                    if gcd(x, y) != 1 or (y == 0 and x != 1):
                        continue
                    m = form_value(f, x, y)
                    if m < 2 or gcd(m, bad) != 1 or not is_prime(m):
                        continue
                    if best is None or m < best[0]:
                        best = (m, x, y)
        m, x, y = best
        g = transform_to_first_coefficient(f, x, y)
        ideal = ideal_from_form(self.dK, g, self.cond)
        assert form_from_ideal(self.dK, ideal, self.cond) == f
        self._reps[f] = ideal
        return ideal

    def class_of_ideal(self, ideal):
        return form_from_ideal(self.dK, ideal, self.cond)

    def class_of_element(self, g):
        """Class of the principal O_K-ideal (g), g prime to p."""
        d, m, s = principal_ideal_hnf(self.dK, g)
        if m == 1:
            return self.identity
        if gcd(m, self.p) != 1:
            raise ValueError("element not prime to p")
        return self.class_of_ideal((m, s))

    def check_group_axioms(self):
        els = self.elements
        e = self.identity
        for f in els:
            if self.mul(f, e) != f or self.mul(f, self.inv(f)) != e:
                return False
        for f in els:
            for g in els:
                if self.mul(f, g) not in self.index:
                    return False
        # associativity on all triples is cubic; check against a generator set
        gens = els[: min(len(els), 6)]
        for f in gens:
            for g in els:
                for h in gens:
                    if self.mul(self.mul(f, g), h) != self.mul(f, self.mul(g, h)):
                        return False
        return True


def ring_class_group(dK, p, n, avoid=1):
    G = RingClassGroup(dK, p, n, avoid)
    if len(G) != class_number_formula(dK, p, n):
        raise AssertionError("class number formula mismatch")
    return G


class TowerMap:
    def __init__(self, upper, lower):
        if (upper.dK, upper.p) != (lower.dK, lower.p) or upper.n < lower.n:
            raise ValueError("incompatible groups")
        self.upper, self.lower = upper, lower
        self.image = {}
        for f in upper.elements:
            ideal = upper.ideal_rep(f)
            self.image[f] = lower.class_of_ideal(ideal)
        self.kernel = [f for f in upper.elements if self.image[f] == lower.identity]
        self.fibres = {}
        for f in upper.elements:
            self.fibres.setdefault(self.image[f], []).append(f)

    def __call__(self, f):
        return self.image[f]

    def lift(self, f):
        return self.fibres[f][0]


def tower_map(upper, lower):
    return TowerMap(upper, lower)


def kernel_class_of_unit(G, gamma):
    """The class in G of a local unit gamma = x + y omega at p: the class of the
    principal ideal (conj(gamma)), gamma taken as a global element."""
    return G.class_of_element(k_conj(G.dK, gamma))


# --------------------------------------------------------------------------
# characters and cyclotomic integers


_PHI = {}


def cyclotomic_polynomial(m):
    """Integer coefficients of Phi_m, lowest degree first."""
    if m in _PHI:
        return _PHI[m]
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divexact(num, cyclotomic_polynomial(d))
    _PHI[m] = num
    return num


def _poly_divexact(a, b):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        q[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    assert not any(a)
    return q


def _poly_mod(a, phi):
    a = list(a)
    d = len(phi) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            for j in range(d + 1):
                a[i - d + j] -= c * phi[j]
    a = a[:d] + [0] * max(0, d - len(a))
    return a


class CyclotomicInteger:
    """An element of Z[zeta_m] in the power basis 1, zeta, ..., zeta^(phi(m)-1)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m, coeffs):
        phi = cyclotomic_polynomial(m)
        self.m = m
        self.coeffs = tuple(_poly_mod(list(coeffs), phi))

    @classmethod
    def zeta_power(cls, m, e, scale=1):
        e %= m
        v = [0] * (e + 1)
        v[e] = scale
        return cls(m, v)

    @classmethod
    def from_exponent_sum(cls, m, pairs):
        """sum of c * zeta^e for (e, c) in pairs."""
        v = [0] * m
        for e, c in pairs:
            v[e % m] += c
        return cls(m, v)

    @classmethod
    def integer(cls, m, k):
        return cls(m, [k])

    def _check(self, other):
        if not isinstance(other, CyclotomicInteger) or other.m != self.m:
            raise ValueError("cyclotomic levels differ")

    def __add__(self, other):
        self._check(other)
        return CyclotomicInteger(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CyclotomicInteger(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.m, [a * other for a in self.coeffs])
        self._check(other)
        prod = [0] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicInteger(self.m, prod)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, CyclotomicInteger) and self.m == other.m and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def galois(self, a):
        """Image under zeta -> zeta^a, gcd(a, m) = 1."""
        if gcd(a, self.m) != 1:
            raise ValueError("a must be a unit mod m")
        v = [0] * self.m
        for i, c in enumerate(self.coeffs):
            v[(i * a) % self.m] += c
        return CyclotomicInteger(self.m, v)

    def content(self):
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def to_json(self):
        return {"m": self.m, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, d):
        return cls(d["m"], d["coeffs"])

    def p_adic_embedding(self, p, M, root_index=0):
        """Lossy map to Z/p^M through a root of Phi_m mod p^M (needs m | p - 1)."""
        r = cyclotomic_root_mod(self.m, p, M, root_index)
        P = p ** M
        return sum(c * pow(r, i, P) for i, c in enumerate(self.coeffs)) % P

    def __repr__(self):
        return f"CyclotomicInteger({self.m}, {list(self.coeffs)})"


def cyclotomic_root_mod(m, p, M, root_index=0):
    if (p - 1) % m:
        raise ValueError("Phi_m has no root in Z_p unless m divides p - 1")
    P = p ** M
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in factor(p - 1)):
        g += 1
    # Teichmuller lift of a primitive root, then its ((p-1)/m)-th power
    t = g
    for _ in range(M + 1):
        t = pow(t, p, P)
    zeta = pow(t, (p - 1) // m, P)
    units = [a for a in range(1, m + 1) if gcd(a, m) == 1] if m > 1 else [1]
    return pow(zeta, units[root_index % len(units)], P)


class RingClassCharacter:
    def __init__(self, group, m, values):
        self.group = group
        self.n = group.n
        self.m = m
        self.values = values

    def __call__(self, f):
        return self.values[f]

    def value(self, f):
        return CyclotomicInteger.zeta_power(self.m, self.values[f])

    def inverse(self):
        return RingClassCharacter(self.group, self.m, {f: (-e) % self.m for f, e in self.values.items()})

    def galois(self, a):
        return RingClassCharacter(self.group, self.m, {f: (a * e) % self.m for f, e in self.values.items()})

    def __mul__(self, other):
        return RingClassCharacter(self.group, self.m,
                                  {f: (e + other.values[f]) % self.m for f, e in self.values.items()})

    def is_trivial(self):
        return not any(self.values.values())

    def key(self):
        return tuple(self.values[f] for f in self.group.elements)

    def __eq__(self, other):
        return isinstance(other, RingClassCharacter) and self.m == other.m and self.key() == other.key()

    def __hash__(self):
        return hash((self.m, self.key()))

    def conductor_exponent(self, kernels):
        """Smallest k with the character trivial on ker(G_n -> G_k); kernels[k]
        lists that kernel for k = 0..n."""
        for k in range(0, self.n + 1):
            if all(self.values[f] == 0 for f in kernels[k]):
                return k
        return self.n  # pragma: no cover


def _triangular_basis(G):
    gens, rels = [], []
    span = {G.identity: ()}
    for f in G.elements:
        if f in span:
            continue
        # order of f modulo the current span
        r, g = 1, f
        while g not in span:
            g = G.mul(g, f)
            r += 1
        rels.append((r, span[g]))
        gens.append(f)
        new = {}
        for h, ex in span.items():
            cur = h
            for e in range(r):
                new[cur] = ex + (e,)
                cur = G.mul(cur, f)
        span = {h: ex + (0,) * (len(gens) - len(ex)) for h, ex in new.items()}
    return gens, rels, span


def all_characters(G):
    gens, rels, span = _triangular_basis(G)
    m = G.exponent()
    chars = []

    def rec(i, cs):
        if i == len(gens):
            vals = {f: sum(e * c for e, c in zip(ex, cs)) % m for f, ex in span.items()}
            chars.append(RingClassCharacter(G, m, vals))
            return
        r, rel = rels[i]
        rel = tuple(rel) + (0,) * (i - len(rel))
        s = sum(e * c for e, c in zip(rel, cs)) % m
        # solve r * c = s mod m
        g = gcd(r, m)
        if s % g:
            raise AssertionError("inconsistent character relation")
        base = (s // g) * pow(r // g, -1, m // g) % (m // g) if m // g > 1 else 0
        for t in range(g):
            rec(i + 1, cs + [base + t * (m // g)])

    rec(0, [])
    if len(chars) != len(G):
        raise AssertionError("character count mismatch")
    return chars


def layer_kernels(groups):
    """kernels[k] = ker(G_n -> G_k) for the top group n = len(groups) - 1."""
    top = groups[-1]
    out = []
    for k in range(len(groups)):
        if k == top.n:
            out.append([top.identity])
        else:
            T = TowerMap(top, groups[k])
            out.append(T.kernel)
    return out


def characters(groups, conductor_exponent):
    """Characters of G_n = groups[-1] that are primitive of conductor p^k."""
    top = groups[-1]
    k = conductor_exponent
    if not 0 <= k <= top.n:
        raise ValueError("conductor exponent out of range")
    kernels = layer_kernels(groups)
    return [chi for chi in all_characters(top) if chi.conductor_exponent(kernels) == k]


def character_sum(chi, weights):
    """sum over A of chi(A) * weights[A], exact in Z[zeta_m]."""
    return CyclotomicInteger.from_exponent_sum(chi.m, [(chi.values[f], c) for f, c in weights.items() if c])


# --------------------------------------------------------------------------
# root number


def generic_root_number(n_plus, n_minus, delta, dK, p=None):
    """-eta(N') for F = Q, eta the quadratic character of K, N' = N+ N-."""
    Np = n_plus * n_minus
    if gcd(Np, dK) != 1:
        raise ValueError("N' must be prime to dK")
    eta = 1
    for q, e in (factor(Np).items() if Np > 1 else []):
        eta *= kronecker(dK, q) ** e
    return -eta
