"""Theta elements in group rings of the layers X_n, their distribution
property, the involution, the L-elements theta * theta^* and exact
specializations at ring class characters.

Powers of the unit root alpha are never evaluated.  A coefficient is a
ledger {exponent: value}; comparisons multiply through by a power of alpha
and reduce in Z[alpha] / (alpha^2 - a_p alpha + p) (delta = 0) or
Z[alpha] / (alpha - a) (delta = 1).
"""

from fractions import Fraction

from . import classfield
from .classfield import CyclotomicInteger


class AlphaRing:
    """Z[alpha] modulo the relation satisfied by the unit root."""

    def __init__(self, delta, ap, p):
        self.delta, self.ap, self.p = delta, ap, p
        if delta == 0:
            # alpha^2 = ap alpha - p
            self.relation = (-p, ap)
        else:
            # alpha = ap
            self.relation = (ap,)

    @property
    def degree(self):
        return len(self.relation)

    def reduce(self, poly, zero):
        """poly: list of coefficients of alpha^0, alpha^1, ... (nonnegative)."""
        poly = list(poly)
        d = self.degree
        for i in range(len(poly) - 1, d - 1, -1):
            c = poly[i]
            if _is_zero(c):
                continue
            poly[i] = zero
            for j, r in enumerate(self.relation):
                poly[i - d + j] = poly[i - d + j] + c * r
        out = poly[:d]
        while len(out) < d:
            out.append(zero)
        return tuple(out)

    def p_adic(self, M):
        from .grosspoints import unit_root
        return unit_root(self.ap, self.p, M, self.delta)


def _is_zero(c):
    if isinstance(c, CyclotomicInteger):
        return c.is_zero()
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c == c * 0


class Ledger:
    """sum over e of alpha^e * coeffs[e], with coefficients in any module
    supporting +, - and multiplication by integers."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {e: c for e, c in (terms or {}).items() if not _is_zero(c)}

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return Ledger(out)

    def __neg__(self):
        return Ledger({e: c * -1 for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return Ledger({e: c * k for e, c in self.terms.items()})

    def shift(self, k):
        return Ledger({e + k: c for e, c in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                v = c1 * c2
                e = e1 + e2
                out[e] = out[e] + v if e in out else v
        return Ledger(out)

    def map(self, fn):
        return Ledger({e: fn(c) for e, c in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def normalized(self, ring, zero, shift=None):
        """Multiply by alpha^shift (default: clear every negative power) and
        reduce in the alpha ring; returns (shift, tuple of coefficients)."""
        if shift is None:
            shift = max([0] + [-e for e in self.terms])
        poly = []
        for e, c in self.terms.items():
            k = e + shift
            if k < 0:
                raise ValueError("shift too small to clear negative powers")
            while len(poly) <= k:
                poly.append(zero)
            poly[k] = poly[k] + c
        return shift, ring.reduce(poly, zero)

    def __eq__(self, other):
        return isinstance(other, Ledger) and self.terms == other.terms

    def __repr__(self):
        def show(c):
            return str(c) if isinstance(c, (int, Fraction)) else repr(c)
        return " + ".join(f"{show(c)}*a^{e}" for e, c in sorted(self.terms.items())) or "0"

    def to_json(self):
        return [[e, _coeff_json(c)] for e, c in sorted(self.terms.items())]


def _coeff_json(c):
    if isinstance(c, CyclotomicInteger):
        return c.to_json()
    if isinstance(c, Fraction):
        return [c.numerator, c.denominator] if c.denominator != 1 else c.numerator
    return c


class GroupAlgebraElement:
    """An element of C[X_n]: ledger-valued coefficients on the forms of G_n."""

    def __init__(self, group, coeffs, zero=0):
        self.group = group
        self.n = group.n
        self.zero = zero
        self.coeffs = {A: L for A, L in coeffs.items() if not L.is_zero()}

    def __getitem__(self, A):
        return self.coeffs.get(A, Ledger())

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for A, L in other.coeffs.items():
            out[A] = out[A] + L if A in out else L
        return GroupAlgebraElement(self.group, out, self.zero)

    def __neg__(self):
        return GroupAlgebraElement(self.group, {A: -L for A, L in self.coeffs.items()}, self.zero)

    def __sub__(self, other):
        return self + (-other)

    def _check(self, other):
        if other.group.D != self.group.D:
            raise ValueError("elements live on different layers")

    def translate(self, sigma):
        """sigma * lambda."""
        G = self.group
        return GroupAlgebraElement(G, {G.mul(sigma, A): L for A, L in self.coeffs.items()}, self.zero)

    def __mul__(self, other):
        self._check(other)
        G = self.group
        out = {}
        for A, L1 in self.coeffs.items():
            for B, L2 in other.coeffs.items():
                C = G.mul(A, B)
                v = L1 * L2
                out[C] = out[C] + v if C in out else v
        return GroupAlgebraElement(G, out, self.zero)

    def augmentation(self):
        tot = Ledger()
        for L in self.coeffs.values():
            tot = tot + L
        return tot

    def map_coeffs(self, fn):
        return GroupAlgebraElement(self.group, {A: L.map(fn) for A, L in self.coeffs.items()}, self.zero)

    def equals(self, other, ring):
        """Equality after clearing alpha powers in the alpha ring."""
        keys = set(self.coeffs) | set(other.coeffs)
        for A in keys:
            d = self[A] - other[A]
            if not d.is_zero() and any(not _is_zero(c) for c in d.normalized(ring, self.zero)[1]):
                return False
        return True

    def to_json(self):
        G = self.group
        return {"level": self.n, "group": {"dK": G.dK, "p": G.p, "n": G.n},
                "entries": [[G.label(A), self.coeffs[A].to_json()] for A in sorted(self.coeffs)]}


# --------------------------------------------------------------------------
# theta elements and the distribution property


def theta_element(delta, group, tables, n, projection=None):
    """theta_n with coefficients alpha^(1-n) t_n(A) - alpha^(-n) t_{n-1}(A-bar)
    (delta = 0) or alpha^(-n) t_n(A) (delta = 1)."""
    if n not in tables or (delta == 0 and n - 1 not in tables):
        raise KeyError("missing table level")
    coeffs = {}
    tn = tables[n]
    for A in group.elements:
        if delta == 0:
            if projection is None:
                raise ValueError("delta = 0 needs the projection to level n-1")
            L = Ledger({1 - n: tn[A]}) + Ledger({-n: -tables[n - 1][projection(A)]})
        else:
            L = Ledger({-n: tn[A]})
        coeffs[A] = L
    return GroupAlgebraElement(group, coeffs)


class ThetaTower:
    def __init__(self, delta, ring, groups, towers, tables):
        self.delta = delta
        self.ring = ring
        self.groups = groups        # n -> RingClassGroup
        self.towers = towers        # n -> TowerMap X_{n+1} -> X_n
        self.tables = tables
        self.levels = {}

    def theta(self, n):
        th = self.levels.get(n)
        if th is None:
            proj = self.towers[n - 1] if self.delta == 0 else None
            th = theta_element(self.delta, self.groups[n], self.tables, n, proj)
            self.levels[n] = th
        return th


def build_tower(gctx, phi, n_top, alpha=None):
    """ThetaTower for the levels 1..n_top of a GrossContext."""
    from .grosspoints import evaluation_table, p_eigenvalue
    if alpha is None:
        alpha = phi.ap if gctx.delta == 0 else p_eigenvalue(gctx, phi)
    ring = AlphaRing(gctx.delta, alpha, gctx.p)
    lo = 0 if gctx.delta == 0 else 1
    tables = {k: evaluation_table(phi, gctx, k) for k in range(lo, n_top + 1)}
    groups = {k: gctx.group(k) for k in range(0, n_top + 1)}
    towers = {k: gctx.tower(k) for k in range(0, n_top)}
    return ThetaTower(gctx.delta, ring, groups, towers, tables)


def check_distribution(tower, n):
    """theta_n(A) = sum over B -> A of theta_{n+1}(B), for every A in X_n."""
    up, down = tower.theta(n + 1), tower.theta(n)
    T = tower.towers[n]
    report = {"levels": [n, n + 1], "checked": 0, "passed": 0, "counterexample": None}
    for A in tower.groups[n].elements:
        s = Ledger()
        for B in T.fibres[A]:
            s = s + up[B]
        shift = n + 2
        lhs = s.normalized(tower.ring, 0, shift)[1]
        rhs = down[A].normalized(tower.ring, 0, shift)[1]
        report["checked"] += 1
        if lhs == rhs:
            report["passed"] += 1
        elif report["counterexample"] is None:
            report["counterexample"] = {"A": list(A), "sum_upper": list(lhs), "lower": list(rhs)}
    report["ok"] = report["passed"] == report["checked"]
    return report


# --------------------------------------------------------------------------
# involution, L-elements, specialization


def involution(lam):
    G = lam.group
    return GroupAlgebraElement(G, {G.inv(A): L for A, L in lam.coeffs.items()}, lam.zero)


class LpElement:
    def __init__(self, element, primitive, inner_product=None):
        self.element = element
        self.primitive = primitive
        self.inner_product = inner_product

    @property
    def n(self):
        return self.element.n

    def coeffs(self):
        return self.element.coeffs


def lp_element(theta, inner_product=None, primitive=False):
    """theta * theta^*; the primitive version divides by the inner product."""
    prod = theta * involution(theta)
    if primitive:
        if not inner_product:
            raise ValueError("primitive L-element needs a nonzero inner product")
        q = Fraction(inner_product)
        prod = prod.map_coeffs(lambda c: Fraction(c) / q)
    return LpElement(prod, primitive, inner_product)


def specialize(lam, chi):
    """sum over A of chi(A) * lambda(A) as a ledger over Z[zeta_m]."""
    if chi.group.D != lam.group.D:
        raise ValueError("character and element live on different layers")
    m = chi.m
    acc = {}
    for A, L in lam.coeffs.items():
        e = chi.values[A]
        for k, c in L.terms.items():
            acc.setdefault(k, []).append((e, c))
    out = {}
    for k, pairs in acc.items():
        v = [0] * m
        for e, c in pairs:
            v[e] += c
        out[k] = CyclotomicInteger(m, v)
    return Ledger(out)


def galois_ledger(L, a):
    return L.map(lambda c: c.galois(a))


def ledger_equal(L1, L2, ring, m):
    zero = CyclotomicInteger(m, [0])
    d = L1 - L2
    if d.is_zero():
        return True
    return all(c.is_zero() for c in d.normalized(ring, zero)[1])


def period_sum(chi, table):
    """sum over A of chi(A) t(A) in Z[zeta_m]."""
    return classfield.character_sum(chi, table)


def verify_shifted_vanishing(tables, group, projection, chi):
    """sum over A in X_n of chi(A) t_{n-1}(A-bar), which vanishes for primitive chi."""
    n = group.n
    weights = {}
    for A in group.elements:
        weights[A] = weights.get(A, 0) + tables[n - 1][projection(A)]
    s = classfield.character_sum(chi, weights)
    return {"n": n, "sum": s.to_json(), "zero": s.is_zero()}


def interpolation_exponent(delta, n):
    """Power of alpha in specialize(theta_n theta_n^*, chi) for primitive chi."""
    return 2 * (1 - n) if delta == 0 else -2 * n


def verify_interpolation_identity(tower, n, chi):
    """chi(theta_n theta_n^*) = alpha^e * S(chi) * S(chi^-1), S the period sum."""
    th = tower.theta(n)
    lhs = specialize(lp_element(th).element, chi)
    table = tower.tables[n]
    S1 = period_sum(chi, table)
    S2 = period_sum(chi.inverse(), table)
    rhs = Ledger({interpolation_exponent(tower.delta, n): S1 * S2})
    return ledger_equal(lhs, rhs, tower.ring, chi.m)


def find_translations(table_new, table_old, group):
    """All sigma with table_new(A) = table_old(sigma A) for every A."""
    return [s for s in group.elements
            if all(table_new[A] == table_old[group.mul(s, A)] for A in group.elements)]


def verify_basis_independence(gctx, phi, n_top, gamma):
    """Compare the builds from e and e' = gamma e at levels up to n_top."""
    from .grosspoints import evaluation_table, moved_table, p_eigenvalue
    delta = gctx.delta
    alpha = phi.ap if delta == 0 else p_eigenvalue(gctx, phi)
    ring = AlphaRing(delta, alpha, gctx.p)
    lo = 0 if delta == 0 else 1
    old = {k: evaluation_table(phi, gctx, k) for k in range(lo, n_top + 1)}
    new = {k: moved_table(phi, gctx, k, gamma) for k in range(lo, n_top + 1)}
    report = {"gamma": list(gamma), "levels": {}, "ok": True}
    sigmas = {}
    for k in range(lo, n_top + 1):
        G = gctx.group(k)
        predicted = classfield.kernel_class_of_unit(G, gamma)
        found = find_translations(new[k], old[k], G)
        sigmas[k] = predicted
        ok = predicted in found
        if k > lo:
            ok = ok and gctx.tower(k - 1)(predicted) == sigmas[k - 1]
        report["levels"][k] = {"predicted": list(predicted), "candidates": len(found), "ok": ok}
        report["ok"] &= ok
    for k in range(max(lo, 1), n_top + 1):
        G = gctx.group(k)
        proj = gctx.tower(k - 1) if delta == 0 else None
        th_old = theta_element(delta, G, old, k, proj)
        th_new = theta_element(delta, G, new, k, proj)
        same_shift = th_new.equals(th_old.translate(G.inv(sigmas[k])), ring)
        same_lp = lp_element(th_new).element.equals(lp_element(th_old).element, ring)
        report["levels"][k]["theta_translate"] = same_shift
        report["levels"][k]["lp_equal"] = same_lp
        report["ok"] &= same_shift and same_lp
    return report
