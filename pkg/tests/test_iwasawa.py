from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from anticyc import classfield as cf, grosspoints as gp, iwasawa as iw

ledgers = st.dictionaries(st.integers(-4, 4), st.integers(-9, 9), max_size=4).map(iw.Ledger)


def evaluate(L, ring, M):
    """Ledger value in Z/p^M at the p-adic unit root (an independent route)."""
    P = ring.p ** M
    a = ring.p_adic(M) % P
    ainv = pow(a, -1, P)
    tot = 0
    for e, c in L.terms.items():
        tot += c * (pow(a, e, P) if e >= 0 else pow(ainv, -e, P))
    return tot % P


# the alpha ring and ledgers ----------------------------------------------------------

@given(ledgers, ledgers)
def test_ledger_ring_laws(x, y):
    z = iw.Ledger({0: 1})
    assert x + y == y + x
    assert (x - x).is_zero()
    assert x * z == x
    assert x * y == y * x
    assert (x + y).scale(3) == x.scale(3) + y.scale(3)
    assert x.shift(2) == x * iw.Ledger({2: 1})


@given(ledgers, ledgers, st.sampled_from([(3, -1), (3, 1), (5, 2), (7, -3)]))
def test_normalized_agrees_with_p_adic_evaluation(x, y, pa):
    p, ap = pa
    ring = iw.AlphaRing(0, ap, p)
    M = 12
    # ledgers that normalize to the same pair agree at the unit root
    s = max([0] + [-e for e in x.terms] + [-e for e in y.terms])
    same = x.normalized(ring, 0, s)[1] == y.normalized(ring, 0, s)[1]
    if same:
        assert evaluate(x, ring, M) == evaluate(y, ring, M)
    # normalization is compatible with evaluation: alpha^s x = c0 + c1 alpha
    c0, c1 = x.normalized(ring, 0, s)[1]
    P = p ** M
    a = ring.p_adic(M)
    assert (c0 + c1 * a) % P == evaluate(x, ring, M) * pow(a, s, P) % P


def test_alpha_relation_reduction():
    ring = iw.AlphaRing(0, -1, 3)
    # alpha^2 = -alpha - 3; alpha^3 = -alpha^2 - 3 alpha = alpha + 3 - 3 alpha
    assert ring.reduce([0, 0, 1], 0) == (-3, -1)
    assert ring.reduce([0, 0, 0, 1], 0) == (3, -2)
    r1 = iw.AlphaRing(1, -1, 7)
    assert r1.reduce([1, 1, 1], 0) == (1,)


def test_ledger_negative_shift_rejected():
    ring = iw.AlphaRing(0, -1, 3)
    with pytest.raises(ValueError):
        iw.Ledger({-3: 1}).normalized(ring, 0, 1)


def test_ledger_repr_and_json():
    L = iw.Ledger({-1: Fraction(26, 5), 0: 2})
    assert repr(L) == "26/5*a^-1 + 2*a^0"
    assert L.to_json() == [[-1, [26, 5]], [0, 2]]


# group algebra -------------------------------------------------------------------------

def _random_element(G, seed):
    return iw.GroupAlgebraElement(G, {A: iw.Ledger({(i * seed) % 3 - 1: (i * seed + 1) % 5 - 2})
                                      for i, A in enumerate(G.elements)})


def test_group_algebra_laws(g11):
    G = g11.group(1)
    ring = iw.AlphaRing(0, -1, 3)
    x, y, z = (_random_element(G, s) for s in (1, 2, 5))
    assert (x * y).equals(y * x, ring)
    assert ((x * y) * z).equals(x * (y * z), ring)
    assert (x * (y + z)).equals(x * y + x * z, ring)
    assert (x * y).augmentation() == x.augmentation() * y.augmentation()
    s = G.elements[1]
    assert x.translate(s).translate(G.inv(s)).equals(x, ring)
    assert iw.involution(iw.involution(x)).equals(x, ring)
    assert iw.involution(x * y).equals(iw.involution(x) * iw.involution(y), ring)
    with pytest.raises(ValueError):
        x + _random_element(g11.group(2), 1)


# theta elements --------------------------------------------------------------------------

def test_theta_shape(tower11, tower14, g11, phi11):
    th = tower11.theta(1)
    t1, t0 = tower11.tables[1], tower11.tables[0]
    proj = g11.tower(0)
    for A in g11.group(1).elements:
        assert th[A] == iw.Ledger({0: t1[A]}) + iw.Ledger({-1: -t0[proj(A)]})
    th14 = tower14.theta(2)
    assert all(set(L.terms) <= {-2} for L in th14.coeffs.values())
    with pytest.raises(KeyError):
        iw.theta_element(0, g11.group(1), {1: t1}, 1, proj)


@pytest.mark.parametrize("name", ["tower11", "tower14"])
def test_distribution_level_one(name, request):
    rep = iw.check_distribution(request.getfixturevalue(name), 1)
    assert rep["ok"], rep["counterexample"]


def test_distribution_detects_wrong_alpha(g14, phi14):
    # with alpha = a_7(E) = +1 the delta = 1 theta elements are not compatible
    tw = iw.build_tower(g14, phi14, 2, alpha=1)
    rep = iw.check_distribution(tw, 1)
    assert not rep["ok"]


def test_distribution_detects_corrupted_table(g11, phi11):
    tw = iw.build_tower(g11, phi11, 2)
    A = next(iter(tw.tables[2]))
    tw.tables[2][A] += 1
    assert not iw.check_distribution(tw, 1)["ok"]


# specialization -----------------------------------------------------------------------------

def test_shifted_vanishing_level_one(tower11, g11):
    gs = g11.groups(1)
    for chi in cf.characters(gs, 1):
        assert iw.verify_shifted_vanishing(tower11.tables, g11.group(1), g11.tower(0), chi)["zero"]
    # the trivial character sees |ker| * sum t_0 instead
    triv = cf.characters(gs, 0)[0]
    rep = iw.verify_shifted_vanishing(tower11.tables, g11.group(1), g11.tower(0), triv)
    assert not rep["zero"]


@pytest.mark.parametrize("name,n", [("tower11", 1), ("tower14", 1)])
def test_involution_specializes_to_inverse(name, n, request):
    tw = request.getfixturevalue(name)
    G = tw.groups[n]
    th = tw.theta(n)
    for chi in cf.all_characters(G):
        a = iw.specialize(iw.involution(th), chi)
        b = iw.specialize(th, chi.inverse())
        assert iw.ledger_equal(a, b, tw.ring, chi.m)


@pytest.mark.parametrize("name", ["tower11", "tower14"])
def test_galois_equivariance_level_one(name, request):
    tw = request.getfixturevalue(name)
    G = tw.groups[1]
    lp = iw.lp_element(tw.theta(1)).element
    for chi in cf.all_characters(G):
        v = iw.specialize(lp, chi)
        for a in range(1, chi.m):
            if gcd(a, chi.m) == 1:
                assert iw.ledger_equal(iw.galois_ledger(v, a), iw.specialize(lp, chi.galois(a)),
                                       tw.ring, chi.m)


@pytest.mark.parametrize("name,g", [("tower11", "g11"), ("tower14", "g14")])
def test_interpolation_identity_level_one(name, g, request):
    tw = request.getfixturevalue(name)
    gctx = request.getfixturevalue(g)
    for chi in cf.characters(gctx.groups(1), 1):
        assert iw.verify_interpolation_identity(tw, 1, chi)


def test_interpolation_exponent():
    assert [iw.interpolation_exponent(0, n) for n in (1, 2, 3)] == [0, -2, -4]
    assert [iw.interpolation_exponent(1, n) for n in (1, 2, 3)] == [-2, -4, -6]


def test_specialize_rejects_wrong_layer(tower11, g11):
    chi = cf.all_characters(g11.group(2))[0]
    with pytest.raises(ValueError):
        iw.specialize(tower11.theta(1), chi)


def test_primitive_lp_scaling_invariance(g11, phi11):
    base = iw.lp_element(iw.build_tower(g11, phi11, 1).theta(1), phi11.inner_product(), primitive=True)
    ring = iw.AlphaRing(0, phi11.ap, 3)
    for c in (2, -3, 5):
        psi = phi11.scaled(c)
        other = iw.lp_element(iw.build_tower(g11, psi, 1).theta(1), psi.inner_product(), primitive=True)
        assert other.element.equals(base.element, ring)
        raw = iw.lp_element(iw.build_tower(g11, psi, 1).theta(1))
        assert not raw.element.equals(iw.lp_element(iw.build_tower(g11, phi11, 1).theta(1)).element, ring)
    with pytest.raises(ValueError):
        iw.lp_element(base.element, 0, primitive=True)


def test_basis_independence_level_one(g11, phi11):
    gamma = (1, 1)
    assert cf.k_norm(-20, gamma) % 3
    rep = iw.verify_basis_independence(g11, phi11, 1, gamma)
    assert rep["ok"]
    assert rep["levels"][1]["lp_equal"]
