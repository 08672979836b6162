"""Lattices in a two-dimensional p-adic space with an action of K_p.

The space is Q_p^2 with K_p acting through the regular representation of
omega = (dK + sqrt(dK))/2 on the ordered basis (1, omega).  The fixed
K_p-basis vector e is the first standard basis vector, so Z_n e is the
lattice with Hermite matrix diag(1, p^n).

A lattice is stored as p^shift times the column span of the Hermite matrix
[[p^a, b], [0, p^c]] with 0 <= b < p^a and min(a, v_p(b), c) = 0.  All data
are exact integers; the context precision M only bounds how deep any single
computation is allowed to go.
"""

from collections import Counter
from dataclasses import dataclass

from ._nt import is_prime, kronecker, vp

SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"


class PrecisionExhausted(ArithmeticError):
    pass


class LocalContext:
    """Prime p, the quadratic field K = Q(sqrt dK) and a working precision."""

    def __init__(self, p, dK=None, n_max=6, precision=None):
        if p == 2 or not is_prime(p):
            raise ValueError("p must be an odd prime")
        self.p = p
        self.dK = dK
        self.n_max = n_max
        self.M = precision if precision is not None else 2 * (n_max + 2)
        if self.M < 2 * (n_max + 2):
            raise ValueError("precision M must be at least 2*(n_max+2)")
        self.modulus = p ** self.M
        self._lp_cache = {}
        self._nbr_cache = {}
        if dK is not None:
            if dK % 4 not in (0, 1) or dK == 0:
                raise ValueError("dK must be a discriminant")
            self.trace = dK
            self.norm = (dK * dK - dK) // 4
            self.eta = kronecker(dK, p)
            self.splitting = {1: SPLIT, -1: INERT, 0: RAMIFIED}[self.eta]
            # omega acts on (1, omega): omega*1 = omega, omega*omega = -N + T omega
            self.W = ((0, -self.norm), (1, self.trace))

    def __repr__(self):
        return f"LocalContext(p={self.p}, dK={self.dK}, M={self.M})"

    def _need_k(self):
        if self.dK is None:
            raise ValueError("this context carries no quadratic field")

    # local K-elements x + y*omega, with x, y integers
    def k_norm(self, g):
        x, y = g
        self._need_k()
        return x * x + self.trace * x * y + self.norm * y * y

    def k_mul(self, g, h):
        x1, y1 = g
        x2, y2 = h
        # omega^2 = T omega - N
        return (x1 * x2 - self.norm * y1 * y2, x1 * y2 + x2 * y1 + self.trace * y1 * y2)

    def k_conj(self, g):
        x, y = g
        return (x + y * self.trace, -y)

    def k_matrix(self, g):
        x, y = g
        self._need_k()
        W = self.W
        return ((x + y * W[0][0], y * W[0][1]), (y * W[1][0], x + y * W[1][1]))

    def uniformizers(self):
        """Uniformizers of the primes of K above p, as local K-elements."""
        self._need_k()
        p = self.p
        if self.splitting == INERT:
            return [(p, 0)]
        if self.splitting == RAMIFIED:
            # sqrt(dK) = 2 omega - dK
            return [(-self.dK, 2)]
        s = next(s for s in range(p) if self.k_norm((s, 1)) % p == 0)
        if self.k_norm((s, 1)) % (p * p) == 0:
            s += p
        pi = (s, 1)
        return [pi, self.k_conj(pi)]


def _mat_vec(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


@dataclass(frozen=True, order=True)
class LocalLattice:
    shift: int
    a: int
    c: int
    b: int
    p: int

    def columns(self):
        """Integer generators (before the p^shift scaling)."""
        return ((self.p ** self.a, 0), (self.b, self.p ** self.c))

    def scale(self, k):
        return LocalLattice(self.shift + k, self.a, self.c, self.b, self.p)

    def homothety_class(self):
        return (self.a, self.c, self.b)

    def level_exponent(self):
        """Exponent of p in the covolume: [Z_p^2 : L] = p^(this)."""
        return self.a + self.c + 2 * self.shift

    def contains_vector(self, v, vshift=0):
        p = self.p
        e = vshift - self.shift
        v1, v2 = v
        f = 0
        if e >= 0:
            v1, v2 = v1 * p ** e, v2 * p ** e
        else:
            f = -e
        # y = v2 / p^(c+f), x = (v1 - b y p^f) / p^(a+f)
        y, r = divmod(v2, p ** (self.c + f))
        if r:
            return False
        return (v1 - self.b * y * p ** f) % p ** (self.a + f) == 0

    def contains(self, other):
        return all(self.contains_vector(col, other.shift) for col in other.columns())

    def __repr__(self):
        return f"L(p^{self.shift}*[[{self.p}^{self.a},{self.b}],[0,{self.p}^{self.c}]])"


def lattice_from_generators(ctx, vecs, shift=0):
    """Hermite form of the Z_p-span of integer vectors, times p^shift."""
    p, P = ctx.p, ctx.modulus
    vecs = [(int(x), int(y)) for x, y in vecs if x or y]
    ys = [v for v in vecs if v[1] != 0]
    if not ys:
        raise ValueError("generators do not span a lattice")
    c = min(vp(v[1], p) for v in ys)
    piv = next(v for v in ys if vp(v[1], p) == c)
    w = piv[1] // p ** c
    winv = pow(w, -1, P)
    px = piv[0] * winv % P
    # eliminate second coordinates against the rescaled pivot (px, p^c)
    xs = []
    for v in vecs:
        if v is piv:
            continue
        t = (v[1] // p ** c) % P
        xs.append((v[0] - t * px) % P)
    nz = [x for x in xs if x % P]
    if not nz:
        raise PrecisionExhausted("lattice degenerate below working precision")
    a = min(vp(x, p) for x in nz)
    if a >= ctx.M or c >= ctx.M:
        raise PrecisionExhausted("Hermite data exceed working precision")
    b = px % p ** a
    m = min(a, c, vp(b, p) if b else a)
    if m:
        a, c, b = a - m, c - m, b // p ** m
        shift += m
    return LocalLattice(shift, a, c, b, p)


def identity_lattice(ctx):
    return LocalLattice(0, 0, 0, 0, ctx.p)


@dataclass(frozen=True, order=True)
class OneLattice:
    """A pair (L(0), L(1)) with L(1) inside L(0) of index p."""

    outer: LocalLattice
    inner: LocalLattice

    def __post_init__(self):
        if not self.outer.contains(self.inner):
            raise ValueError("inner lattice must lie in the outer lattice")
        if self.inner.level_exponent() - self.outer.level_exponent() != 1:
            raise ValueError("inner lattice must have index p")

    def scale(self, k):
        return OneLattice(self.outer.scale(k), self.inner.scale(k))

    def __repr__(self):
        return f"({self.outer!r}, {self.inner!r})"


class FormalLatticeSum:
    """Finite Z-linear combination of lattices (or of 1-lattices)."""

    def __init__(self, terms=None):
        self.terms = Counter()
        self.kind = None
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for t, c in items:
                self._add(t, c)

    def _add(self, t, c):
        kind = type(t)
        if self.kind is None:
            self.kind = kind
        elif kind is not self.kind:
            raise TypeError("mixed lattice kinds in one formal sum")
        self.terms[t] += c
        if self.terms[t] == 0:
            del self.terms[t]

    @classmethod
    def of(cls, xs):
        s = cls()
        for x in xs:
            s._add(x, 1)
        return s

    def __add__(self, other):
        out = FormalLatticeSum(self.terms)
        out.kind = out.kind or other.kind
        for t, c in other.terms.items():
            out._add(t, c)
        return out

    def __neg__(self):
        out = FormalLatticeSum()
        for t, c in self.terms.items():
            out._add(t, -c)
        return out

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, FormalLatticeSum) and dict(self.terms) == dict(other.terms)

    def __len__(self):
        return sum(abs(c) for c in self.terms.values())

    def coefficient_sum(self):
        return sum(self.terms.values())

    def items(self):
        return sorted(self.terms.items())

    def __repr__(self):
        return "FormalLatticeSum(" + ", ".join(f"{c}*{t!r}" for t, c in self.items()) + ")"


# --------------------------------------------------------------------------
# neighbours, invariants, predecessors


def neighbours(ctx, L, direction="lower"):
    """The p+1 index-p sub- (lower) or super- (upper) lattices, sorted."""
    key = (L, direction)
    hit = ctx._nbr_cache.get(key)
    if hit is not None:
        return list(hit)
    p = ctx.p
    (h11, _), (h12, h22) = L.columns()[0], L.columns()[1]
    pa = h11
    out = []
    for t in range(p):
        # H * [[p, t], [0, 1]]
        out.append(lattice_from_generators(ctx, [(pa * p, 0), (t * pa + h12, h22)], L.shift))
    # H * [[1, 0], [0, p]]
    out.append(lattice_from_generators(ctx, [(pa, 0), (p * h12, p * h22)], L.shift))
    if direction == "upper":
        out = [x.scale(-1) for x in out]
    elif direction != "lower":
        raise ValueError("direction must be 'lower' or 'upper'")
    out = sorted(out)
    if len(ctx._nbr_cache) < 200000:
        ctx._nbr_cache[key] = tuple(out)
    return out


def kp_act(ctx, g, x):
    """gamma * x for a local K-element gamma = (u, v) meaning u + v*omega."""
    if isinstance(x, OneLattice):
        return OneLattice(kp_act(ctx, g, x.outer), kp_act(ctx, g, x.inner))
    if ctx.k_norm(g) == 0:
        raise ValueError("gamma must be invertible")
    m = ctx.k_matrix(g)
    return lattice_from_generators(ctx, [_mat_vec(m, col) for col in x.columns()], x.shift)


def _order_span(ctx, k, L):
    # Z_k * L = L + p^k omega L
    W = ctx.W
    pk = ctx.p ** k
    gens = list(L.columns())
    gens += [tuple(pk * t for t in _mat_vec(W, col)) for col in L.columns()]
    return lattice_from_generators(ctx, gens, L.shift)


def lp_invariant(ctx, L):
    """The n with Stab_{K_p^x}(L) = Z_n^x (for a 1-lattice, the max of both)."""
    if isinstance(L, OneLattice):
        return max(lp_invariant(ctx, L.outer), lp_invariant(ctx, L.inner))
    ctx._need_k()
    key = L.homothety_class()
    hit = ctx._lp_cache.get(key)
    if hit is not None:
        return hit
    if L.a + L.c >= ctx.M:
        raise PrecisionExhausted("lattice too deep for the working precision")
    W = ctx.W
    cols = L.columns()
    wcols = [_mat_vec(W, col) for col in cols]
    for k in range(L.a + L.c + 1):
        pk = ctx.p ** k
        if all(L.contains_vector((pk * v[0], pk * v[1]), L.shift) for v in wcols):
            ctx._lp_cache[key] = k
            return k
    raise PrecisionExhausted("stabilizer not resolved")  # pragma: no cover


def order_times(ctx, k, L):
    """Z_k * L."""
    if isinstance(L, OneLattice):
        return OneLattice(order_times(ctx, k, L.outer), order_times(ctx, k, L.inner))
    return _order_span(ctx, k, L)


def predecessor(ctx, L, direction="upper"):
    l = lp_invariant(ctx, L)
    if l < 1:
        raise ValueError("depth-zero lattice has no predecessor")
    up = _order_span(ctx, l - 1, L)
    if direction == "upper":
        return up
    if direction == "lower":
        return up.scale(1)
    raise ValueError("direction must be 'lower' or 'upper'")


def unit_coset_reps(ctx, n):
    """Representatives of Z_{n-1}^x / Z_n^x as local K-elements."""
    if n < 1:
        raise ValueError("n must be positive")
    p = ctx.p
    ctx._need_k()
    if n >= 2:
        return [(1, t * p ** (n - 1)) for t in range(p)]
    if ctx.splitting == RAMIFIED:
        return [(1 - t * ctx.dK, 2 * t) for t in range(p)]
    reps = [(1, t) for t in range(p) if ctx.k_norm((1, t)) % p]
    if ctx.k_norm((0, 1)) % p:
        reps.append((0, 1))
    return reps


def hecke(ctx, s, direction="lower"):
    if not isinstance(s, FormalLatticeSum):
        s = FormalLatticeSum.of([s])
    out = FormalLatticeSum()
    for t, c in s.terms.items():
        if isinstance(t, OneLattice):
            if direction == "lower":
                new = [OneLattice(t.outer, x) for x in neighbours(ctx, t.outer, "lower")
                       if x != t.inner]
            elif direction == "upper":
                new = [OneLattice(x, t.inner) for x in neighbours(ctx, t.inner, "upper")
                       if x != t.outer]
            else:
                raise ValueError("direction must be 'lower' or 'upper'")
        else:
            new = neighbours(ctx, t, direction)
        for x in new:
            out._add(x, c)
    return out


def trace_orbit(ctx, x):
    l = lp_invariant(ctx, x)
    if l < 1:
        raise ValueError("trace needs l_p >= 1")
    return FormalLatticeSum.of(kp_act(ctx, g, x) for g in unit_coset_reps(ctx, l))


def trace_correction(ctx, x):
    """The term x'' of the trace formula, as a formal sum."""
    xp = predecessor(ctx, x, "upper")
    if lp_invariant(ctx, x) >= 2:
        return FormalLatticeSum.of([predecessor(ctx, xp, "lower")])
    if ctx.splitting == INERT:
        return FormalLatticeSum()
    return FormalLatticeSum.of(kp_act(ctx, w, xp) for w in ctx.uniformizers())


def neighbour_census(ctx, L):
    """Check the shape of the lower neighbours of L against l_p(L).

    Depth zero: exactly 1 + eta neighbours stay at depth zero.  Otherwise the
    unique shallower neighbour is pr_l(L).  In both cases every other
    neighbour has depth l_p(L) + 1, upper predecessor L, and these are
    permuted simply transitively by the unit cosets at that depth.
    """
    l = lp_invariant(ctx, L)
    nb = neighbours(ctx, L, "lower")
    depth = [lp_invariant(ctx, x) for x in nb]
    if l == 0:
        same = [x for x, d in zip(nb, depth) if d == 0]
        ok = len(same) == 1 + ctx.eta
        rest = [x for x, d in zip(nb, depth) if d != 0]
    else:
        shallow = [x for x, d in zip(nb, depth) if d < l]
        ok = len(shallow) == 1 and shallow[0] == predecessor(ctx, L, "lower")
        rest = [x for x, d in zip(nb, depth) if d >= l]
    ok = ok and all(lp_invariant(ctx, x) == l + 1 for x in rest)
    ok = ok and all(predecessor(ctx, x, "upper") == L for x in rest)
    if rest:
        reps = unit_coset_reps(ctx, l + 1)
        orbit = [kp_act(ctx, g, rest[0]) for g in reps]
        ok = ok and len(reps) == len(rest) and sorted(orbit) == sorted(rest)
    return ok


# --------------------------------------------------------------------------
# 1-lattices

TYPE_I, TYPE_II, TYPE_III = "I", "II", "III"


def classify_one_lattice(ctx, M):
    l0, l1 = lp_invariant(ctx, M.outer), lp_invariant(ctx, M.inner)
    if l0 < l1:
        return TYPE_I
    if l0 > l1:
        return TYPE_II
    return TYPE_III


def one_lattice_predecessor(ctx, M):
    t = classify_one_lattice(ctx, M)
    if t == TYPE_III or lp_invariant(ctx, M) < 2:
        raise ValueError("predecessor needs a type I or II 1-lattice with l_p >= 2")
    if t == TYPE_I:
        return OneLattice(M.outer, predecessor(ctx, M.outer, "lower"))
    return OneLattice(predecessor(ctx, M.inner, "upper"), M.inner)


def standard_sequence(ctx, delta, n):
    """x_n: the lattice Z_n e (delta=0) or the 1-lattice M_n (delta=1)."""
    p = ctx.p
    if delta == 0:
        if n < 0:
            raise ValueError("n must be >= 0")
        return lattice_from_generators(ctx, [(1, 0), (0, p ** n)])
    if delta != 1:
        raise ValueError("delta must be 0 or 1")
    if n < 1:
        raise ValueError("n must be >= 1 for delta = 1")

    def L(m):
        return lattice_from_generators(ctx, [(1, 0), (0, p ** m)], -(m // 2))

    if n % 2:
        return OneLattice(L(n - 1), L(n))
    return OneLattice(L(n), L(n - 1))


# --------------------------------------------------------------------------
# p-new quotient of Z[L_1]


def in_pnew_relations(ctx, s):
    """Decide whether a formal sum of 1-lattices lies in the span of the
    p-new relations (sum over L'(0) = M and sum over L'(1) = M).

    Writing the candidate combination as sum c_M R0_M + sum d_M R1_M, the
    coefficient of an edge (A, B) is c_A + d_B.  Unknowns are attached to the
    outer and inner lattices met by `s`; every edge touching them gives one
    equation, solved by propagation.  Returns the nonzero coefficients when
    consistent, else None.
    """
    if not s.terms:
        return {}
    # edges are plain (outer, inner) pairs here; they are valid by construction
    given = {(t.outer, t.inner): c for t, c in s.terms.items()}
    outers = {a for a, _ in given}
    inners = {b for _, b in given}
    eqs = {}
    for m in outers:
        for x in neighbours(ctx, m, "lower"):
            eqs[(m, x)] = given.get((m, x), 0)
    for m in inners:
        for x in neighbours(ctx, m, "upper"):
            eqs[(x, m)] = given.get((x, m), 0)
    adj = {}
    anchored = []
    for (a, b), rhs in eqs.items():
        u = ("0", a) if a in outers else None
        w = ("1", b) if b in inners else None
        if u and w:
            adj.setdefault(u, []).append((w, rhs))
            adj.setdefault(w, []).append((u, rhs))
        else:
            anchored.append((u or w, rhs))
    value = {}

    def propagate(start, val):
        stack = [(start, val)]
        while stack:
            u, v = stack.pop()
            if u in value:
                if value[u] != v:
                    return False
                continue
            value[u] = v
            for w, rhs in adj.get(u, ()):
                stack.append((w, rhs - v))
        return True

    for u, rhs in anchored:
        if not propagate(u, rhs):
            return None
    unknowns = [("0", m) for m in sorted(outers)] + [("1", m) for m in sorted(inners)]
    for u in unknowns:
        if u not in value and not propagate(u, 0):
            return None
    return {u: v for u, v in value.items() if v}


# --------------------------------------------------------------------------
# verification oracle


def verify_trace_relations(ctx, delta, sample):
    """Check the trace formulas on each sample class.

    delta=0: Tr(x) = T^l(pr_u x) - x''.
    delta=1: Tr(x) = T^l(pr x) (type I) or T^u(pr x) (type II), and
    Tr(x) + pr(x) lies in the p-new relation span.
    """
    report = {"checked": 0, "passed": 0, "counterexample": None}
    for x in sample:
        report["checked"] += 1
        tr = trace_orbit(ctx, x)
        if delta == 0:
            rhs = hecke(ctx, predecessor(ctx, x, "upper"), "lower") - trace_correction(ctx, x)
            ok = tr == rhs
        else:
            kind = classify_one_lattice(ctx, x)
            pr = one_lattice_predecessor(ctx, x)
            rhs = hecke(ctx, pr, "lower" if kind == TYPE_I else "upper")
            ok = tr == rhs and in_pnew_relations(ctx, tr + FormalLatticeSum.of([pr])) is not None
        if ok:
            report["passed"] += 1
        elif report["counterexample"] is None:
            report["counterexample"] = {"x": repr(x), "trace": repr(tr), "expected": repr(rhs)}
    report["ok"] = report["passed"] == report["checked"]
    return report


def depth_zero_seeds(ctx):
    """Depth-zero vertices at distance at most one from the identity lattice."""
    base = identity_lattice(ctx)
    seeds = [base]
    for x in neighbours(ctx, base, "lower"):
        if lp_invariant(ctx, x) == 0:
            seeds.append(x.scale(-x.shift))
    return seeds


def descend(ctx, max_depth, seeds=None):
    """All vertices reached from the seeds by stepping to children (l_p + 1)."""
    layer = [s.scale(-s.shift) for s in (seeds or depth_zero_seeds(ctx))]
    seen = {v.homothety_class() for v in layer}
    out = list(layer)
    for _ in range(max_depth):
        nxt = []
        for v in layer:
            lv = lp_invariant(ctx, v)
            for w in neighbours(ctx, v, "lower"):
                key = w.homothety_class()
                if key in seen or lp_invariant(ctx, w) != lv + 1:
                    continue
                seen.add(key)
                w = w.scale(-w.shift)
                nxt.append(w)
        out.extend(nxt)
        layer = nxt
    return out
