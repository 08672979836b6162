"""Gross points: the classes A * x_n in K^x \\ B^x_f / R^x_f, their conductors
and the values of an integral eigenform on them.

A class A of Pic(O_{p^n}) with prime ideal representative a = [m, s + omega]
acts on the standard class x_n through the right ideal

    { y in iota(a) R : y_p maps the base lattices into the x_n lattices },

which is then matched against the class-set representatives.
"""

from fractions import Fraction
from math import gcd

from . import btree, classfield, quatarith
from ._nt import vp


class NotOrdinary(ValueError):
    pass


class EigenformError(ValueError):
    pass


# --------------------------------------------------------------------------
# unit roots and eigenforms


def unit_root(ap, p, M, delta=0):
    """The p-adic unit root of t^2 - ap t + p modulo p^M (delta = 0), or ap
    itself (delta = 1, where the U_p eigenvalue is already the unit root)."""
    if ap % p == 0:
        raise NotOrdinary(f"a_p = {ap} is not a p-adic unit")
    if delta == 1:
        return ap
    P = p ** M
    # mod p the unit root is ap itself; lift with Newton steps
    a = ap % p
    mod = p
    while mod < P:
        mod = min(mod * mod, P)
        f = (a * a - ap * a + p) % mod
        df = (2 * a - ap) % mod
        a = (a - f * pow(df, -1, mod)) % mod
    assert (a * a - ap * a + p) % P == 0
    return a


class Eigenform:
    def __init__(self, values, eigenvalues, weights, p=None, ap=None, delta=0):
        self.values = list(values)
        self.eigenvalues = dict(eigenvalues)
        self.weights = list(weights)
        self.p = p
        self.ap = ap
        self.delta = delta

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def scaled(self, c):
        return Eigenform([c * v for v in self.values], self.eigenvalues, self.weights,
                         self.p, self.ap, self.delta)

    def inner_product(self):
        """sum phi_i^2 / w_i."""
        return sum(Fraction(v * v, w) for v, w in zip(self.values, self.weights))

    def ordinarity_certificate(self):
        if self.p is None or self.ap is None:
            return None
        return vp(self.ap, self.p) == 0 if self.ap else False

    def to_json(self):
        return {"values": self.values, "eigenvalues": {str(k): v for k, v in sorted(self.eigenvalues.items())},
                "weights": self.weights, "p": self.p, "ap": self.ap, "delta": self.delta}

    @classmethod
    def from_json(cls, d):
        return cls(d["values"], {int(k): v for k, v in d["eigenvalues"].items()}, d["weights"],
                   d["p"], d["ap"], d["delta"])

    def __repr__(self):
        return f"Eigenform({self.values}, a_p={self.ap})"


def _nullspace(rows, ncols):
    """Rational basis of {x : rows x = 0}."""
    m = [[Fraction(v) for v in r] for r in rows]
    piv_cols = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(piv_cols):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def _primitive(v):
    d = 1
    for x in v:
        d = d * x.denominator // gcd(d, x.denominator)
    w = [int(x * d) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    w = [x // g for x in w]
    first = next(x for x in w if x)
    return [-x for x in w] if first < 0 else w


def eigenform_from_brandt(cs, targets, p=None, delta=0, brandt=None, ap=None):
    """Integral primitive eigenvector of the Brandt matrices with the target
    eigenvalues {ell: a_ell}; ells dividing disc * level are skipped."""
    R = cs.order
    N = R.B.disc * R.level
    h = len(cs)
    brandt = dict(brandt or {})
    used = {}
    rows = []
    for ell, a in sorted(targets.items()):
        if N % ell == 0:
            continue
        if ell not in brandt:
            brandt[ell] = quatarith.brandt_matrix(cs, ell)
        B = brandt[ell]
        used[ell] = a
        rows += [[B[i][j] - (a if i == j else 0) for j in range(h)] for i in range(h)]
    if not used:
        raise EigenformError("no usable eigenvalue targets")
    ker = _nullspace(rows, h)
    if not ker:
        raise EigenformError("target eigensystem does not occur on this class set")
    if len(ker) > 1:
        raise EigenformError(f"eigensystem ambiguous: {len(ker)}-dimensional; add more primes")
    vals = _primitive(ker[0])
    # orthogonal to the Eisenstein direction: sum phi_i / w_i = 0
    if sum(Fraction(v, w) for v, w in zip(vals, cs.weights)) != 0:
        raise EigenformError("target eigensystem is Eisenstein")
    if ap is None and p is not None and N % p:
        ap = targets.get(p)
    return Eigenform(vals, used, cs.weights, p, ap, delta)


# --------------------------------------------------------------------------
# the global setting at p


class GrossContext:
    """Everything needed to evaluate forms at Gross points for one config."""

    def __init__(self, disc, level_plus, p, delta, dK, n_max=3, precision=None,
                 class_set_factory=None):
        if delta not in (0, 1):
            raise ValueError("delta must be 0 or 1")
        self.disc, self.level_plus, self.p, self.delta, self.dK = disc, level_plus, p, delta, dK
        self.level = level_plus * p ** delta
        self.n_max = n_max
        self.M = precision or 2 * (n_max + 3)
        B = quatarith.build_algebra(disc)
        O = quatarith.maximal_order(B)
        obstruct = quatarith.embedding_obstruction(disc, self.level, dK)
        if obstruct is not None:
            raise quatarith.NoEmbedding(f"prime {obstruct} has the wrong splitting in K")
        q = quatarith.optimal_embedding(O, dK).q
        R = quatarith.eichler_order(O, self.level, omega=q) if self.level > 1 else O
        self.B, self.O, self.R = B, O, R
        self.embedding = quatarith.OptimalEmbedding(R, dK, q)
        if self.embedding.conductor_in(R.lattice) != 1:
            raise quatarith.NoEmbedding("embedding is not optimal")
        self.ctx = btree.LocalContext(p, dK, n_max=n_max + 1, precision=self.M)
        self.split = quatarith.LocalSplitting(O, p, self.M, omega=q)
        P = self.ctx.modulus
        W = tuple(tuple(v % P for v in row) for row in self.ctx.W)
        if self.split(q) != W:
            raise AssertionError("local splitting does not carry omega to the tree model")
        self.base = [btree.identity_lattice(self.ctx)]
        if delta == 1:
            mats = [self.split(r) for r in R.basis()]
            good = [L for L in btree.neighbours(self.ctx, self.base[0], "lower")
                    if all(quatarith._stabilizes(self.ctx, m, L) for m in mats)]
            if len(good) != 1:
                raise AssertionError("Eichler order does not fix a unique sublattice at p")
            self.base.append(good[0])
        factory = class_set_factory or quatarith.right_ideal_class_set
        self.class_set = factory(R)
        self.avoid = disc * level_plus
        self._groups = {}
        self._points = {}

    # groups -----------------------------------------------------------
    def group(self, n):
        G = self._groups.get(n)
        if G is None:
            G = classfield.ring_class_group(self.dK, self.p, n, avoid=self.avoid)
            self._groups[n] = G
        return G

    def groups(self, n):
        return [self.group(k) for k in range(n + 1)]

    def tower(self, n):
        """pi_{n+1, n}."""
        key = ("tower", n)
        T = self._groups.get(key)
        if T is None:
            T = classfield.tower_map(self.group(n + 1), self.group(n))
            self._groups[key] = T
        return T

    # points ----------------------------------------------------------
    def x(self, n):
        """Target lattices of the standard class x_n (a list matching base)."""
        if self.delta == 0:
            return [btree.standard_sequence(self.ctx, 0, n)]
        if n == 0:
            return list(self.base)
        M = btree.standard_sequence(self.ctx, 1, n)
        return [M.outer, M.inner]

    def ideal_of(self, ideal):
        """iota(a) R for a = [m, s + omega]."""
        m, s = ideal
        fr = self.R.frame
        a1 = tuple(m * t for t in fr.one)
        a2 = tuple(s * fr.one[j] + self.embedding.q[j] for j in range(4))
        return quatarith.left_multiply(self.R, [a1, a2], quatarith.unit_ideal(self.R))

    def point_ideal(self, ideal, targets):
        I = self.ideal_of(ideal)
        return quatarith.restrict_at_p(self.split, self.ctx, I, self.base, targets)


class GrossPoint:
    def __init__(self, class_index, n, A, ideal, right_ideal):
        self.class_index = class_index
        self.n = n
        self.A = A
        self.ideal = ideal
        self.right_ideal = right_ideal

    def __repr__(self):
        return f"GrossPoint(class={self.class_index}, n={self.n}, A={self.A})"


def star_act(gctx, A, n, ideal=None, targets=None):
    """The point A * x_n (or A acting on other target lattices)."""
    G = gctx.group(n)
    if ideal is None:
        ideal = G.ideal_rep(A)
    elif G.class_of_ideal(ideal) != A:
        raise ValueError("ideal does not represent the class")
    key = None
    if targets is None:
        key = (n, ideal)
        hit = gctx._points.get(key)
        if hit is not None:
            return hit
        targets = gctx.x(n)
    J = gctx.point_ideal(ideal, targets)
    idx = gctx.class_set.classify(J)
    pt = GrossPoint(idx, n, A, ideal, J)
    if key is not None:
        gctx._points[key] = pt
    return pt


def conductor(gctx, point):
    """Conductor of K inside the left order of the point's ideal."""
    return gctx.embedding.conductor_in(point.right_ideal.left_order().lattice)


def evaluation_table(phi, gctx, n):
    """A -> phi(A * x_n) over the whole of X_n."""
    G = gctx.group(n)
    return {A: phi[star_act(gctx, A, n).class_index] for A in G.elements}


def p_operator_matrices(gctx):
    """Matrices of the operators at p on functions on the class set.

    delta = 0: the p+1 lower neighbours (the Brandt matrix at p).
    delta = 1: (T^l, T^u) moving the inner (resp. outer) lattice of the base
    1-lattice to the other p choices.
    """
    cs = gctx.class_set
    h = len(cs)
    ctx = gctx.ctx
    names = ["T"] if gctx.delta == 0 else ["Tl", "Tu"]
    out = {name: [[0] * h for _ in range(h)] for name in names}
    for i, I in enumerate(cs.reps):
        cur = quatarith.ideal_local_lattices(gctx.split, ctx, I, gctx.base)
        if gctx.delta == 0:
            moves = {"T": [[L] for L in btree.neighbours(ctx, cur[0], "lower")]}
        else:
            outer, inner = cur
            moves = {"Tl": [[outer, L] for L in btree.neighbours(ctx, outer, "lower") if L != inner],
                     "Tu": [[L, inner] for L in btree.neighbours(ctx, inner, "upper") if L != outer]}
        for name, tl in moves.items():
            for targets in tl:
                J = quatarith.restrict_at_p(gctx.split, ctx, I, gctx.base, targets)
                out[name][i][cs.classify(J)] += 1
    return out


def apply_matrix(mat, v):
    return [sum(a * b for a, b in zip(row, v)) for row in mat]


def p_eigenvalue(gctx, phi):
    """The eigenvalue at p of phi: a_p (delta=0) or the common T^l/T^u value."""
    mats = p_operator_matrices(gctx)
    vals = set()
    for mat in mats.values():
        img = apply_matrix(mat, phi.values)
        i = next(k for k, v in enumerate(phi.values) if v)
        lam = Fraction(img[i], phi.values[i])
        if any(img[k] != lam * phi.values[k] for k in range(len(img))):
            raise EigenformError("phi is not an eigenvector of the operators at p")
        vals.add(lam)
    if len(vals) != 1:
        raise EigenformError("lower and upper eigenvalues differ")
    lam = vals.pop()
    if lam.denominator != 1:
        raise EigenformError("non-integral eigenvalue at p")
    return int(lam)


def is_p_new(gctx, phi):
    """Degeneracy traces vanish: summing phi over all p+1 choices of the inner
    (or outer) lattice gives zero."""
    if gctx.delta != 1:
        return False
    mats = p_operator_matrices(gctx)
    for mat in mats.values():
        img = apply_matrix(mat, phi.values)
        if any(a + b for a, b in zip(img, phi.values)):
            return False
    return True


def verify_global_trace(gctx, phi, n, ap=None, tables=None):
    """Check sum over the kernel of pi_{n+1,n} of t_{n+1}(gamma A~) against
    ap t_n(A) - t_{n-1}(A-bar) (delta=0) or ap t_n(A) (delta=1)."""
    if ap is None:
        ap = phi.ap
    tables = tables if tables is not None else {}

    def t(k):
        if k not in tables:
            tables[k] = evaluation_table(phi, gctx, k)
        return tables[k]

    T = gctx.tower(n)
    up = gctx.group(n + 1)
    report = {"n": n, "checked": 0, "passed": 0, "counterexample": None}
    t1, t0 = t(n + 1), t(n)
    tm = t(n - 1) if gctx.delta == 0 else None
    down = gctx.tower(n - 1) if gctx.delta == 0 else None
    for A in gctx.group(n).elements:
        lift = T.lift(A)
        lhs = sum(t1[up.mul(g, lift)] for g in T.kernel)
        rhs = ap * t0[A]
        if gctx.delta == 0:
            rhs -= tm[down(A)]
        report["checked"] += 1
        if lhs == rhs:
            report["passed"] += 1
        elif report["counterexample"] is None:
            report["counterexample"] = {"A": list(A), "lhs": lhs, "rhs": rhs}
    report["ok"] = report["passed"] == report["checked"]
    return report


def verify_conductors(gctx, n):
    report = {"n": n, "checked": 0, "passed": 0, "counterexample": None}
    want = gctx.p ** n
    for A in gctx.group(n).elements:
        c = conductor(gctx, star_act(gctx, A, n))
        report["checked"] += 1
        if c == want:
            report["passed"] += 1
        elif report["counterexample"] is None:
            report["counterexample"] = {"A": list(A), "conductor": c, "expected": want}
    report["ok"] = report["passed"] == report["checked"]
    return report


def verify_kernel_bridge(gctx, n):
    """For each local unit coset gamma of Z_{n-1}^x / Z_n^x, acting on x_n by
    gamma locally gives the same class as acting by its global kernel class.

    Returns (ok, mapping gamma -> kernel class)."""
    G = gctx.group(n)
    T = gctx.tower(n - 1)
    kernel = set(T.kernel)
    mapping = {}
    ok = True
    xs = gctx.x(n)
    for g in btree.unit_coset_reps(gctx.ctx, n):
        kappa = classfield.kernel_class_of_unit(G, g)
        mapping[g] = kappa
        if kappa not in kernel:
            ok = False
            continue
        moved = [btree.kp_act(gctx.ctx, g, L) for L in xs]
        for A in G.elements:
            local = star_act(gctx, A, n, targets=moved).class_index
            glob = star_act(gctx, G.mul(kappa, A), n).class_index
            if local != glob:
                ok = False
    if len(set(mapping.values())) != len(kernel) or set(mapping.values()) != kernel:
        ok = False
    return ok, mapping


def moved_table(phi, gctx, n, gamma):
    """A -> phi(A * gamma x_n), for a different choice e' = gamma e."""
    G = gctx.group(n)
    moved = [btree.kp_act(gctx.ctx, gamma, L) for L in gctx.x(n)]
    return {A: phi[star_act(gctx, A, n, targets=moved).class_index] for A in G.elements}
