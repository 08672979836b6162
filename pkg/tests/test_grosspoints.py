from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from anticyc import btree, classfield as cf, grosspoints as gp, quatarith as Q
from anticyc._nt import is_prime


def other_ideal(G, A, avoid):
    """A second prime ideal [m, s + omega] in the class A, different from ideal_rep."""
    first = G.ideal_rep(A)
    bad = G.p * abs(G.dK) * avoid
    for x in range(-8, 9):
        for y in range(1, 9):
            if gcd(x, y) != 1:
                continue
            m = cf.form_value(A, x, y)
            if m == first[0] or m < 2 or gcd(m, bad) != 1 or not is_prime(m):
                continue
            g = cf.transform_to_first_coefficient(A, x, y)
            return cf.ideal_from_form(G.dK, g, G.cond)
    raise AssertionError("no second ideal found")


# unit roots ------------------------------------------------------------------

@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(-30, 30), st.integers(1, 40))
def test_unit_root(p, ap, M):
    if ap % p == 0:
        with pytest.raises(gp.NotOrdinary):
            gp.unit_root(ap, p, M)
        return
    a = gp.unit_root(ap, p, M)
    P = p ** M
    assert (a * a - ap * a + p) % P == 0
    assert a % p != 0
    assert a % p == ap % p


def test_unit_root_delta_one():
    assert gp.unit_root(-1, 7, 10, delta=1) == -1
    with pytest.raises(gp.NotOrdinary):
        gp.unit_root(7, 7, 10, delta=1)


# eigenforms -------------------------------------------------------------------

def test_eigenform_11a(g11, phi11):
    assert len(g11.class_set) == 2
    # (phi, phi) = sum phi_i^2 / w_i
    assert phi11.inner_product() == sum(Fraction(v * v, w) for v, w in zip(phi11.values, phi11.weights))
    assert phi11.inner_product() == 5
    assert sorted(abs(v) for v in phi11.values) == [2, 3]
    assert phi11.ap == -1 and phi11.ordinarity_certificate()
    assert gp.Eigenform.from_json(phi11.to_json()).values == phi11.values


def test_eigenform_is_eigenvector_for_every_prime(g11, phi11, ev11):
    for ell in (2, 3, 5, 7, 13, 17, 19, 23):
        B = Q.brandt_matrix(g11.class_set, ell)
        assert gp.apply_matrix(B, phi11.values) == [ev11[ell] * v for v in phi11.values]


def test_eigenform_errors(g11):
    cs = g11.class_set
    with pytest.raises(gp.EigenformError):
        gp.eigenform_from_brandt(cs, {2: 3})  # Eisenstein eigenvalue ell + 1
    with pytest.raises(gp.EigenformError):
        gp.eigenform_from_brandt(cs, {2: 5})
    with pytest.raises(gp.EigenformError):
        gp.eigenform_from_brandt(cs, {11: 1})
    with pytest.raises(gp.EigenformError):
        gp.eigenform_from_brandt(Q.right_ideal_class_set(Q.maximal_order(Q.build_algebra(7))), {})


def test_eigenform_scaling(phi11):
    assert phi11.scaled(3).inner_product() == 9 * phi11.inner_product()


# the context ----------------------------------------------------------------------

@pytest.mark.parametrize("name", ["g11", "g14"])
def test_context_splitting_matches_tree_model(name, request):
    g = request.getfixturevalue(name)
    P = g.ctx.modulus
    assert g.split(g.embedding.q) == tuple(tuple(v % P for v in row) for row in g.ctx.W)
    assert g.embedding.conductor_in(g.R.lattice) == 1
    assert g.R.discriminant() == g.disc * g.level
    mats = [g.split(r) for r in g.R.basis()]
    for L in g.base:
        assert all(Q._stabilizes(g.ctx, m, L) for m in mats)


def test_context_rejects():
    with pytest.raises(ValueError):
        gp.GrossContext(11, 1, 3, 2, -20)
    with pytest.raises(Q.NoEmbedding):
        gp.GrossContext(11, 1, 3, 0, -19)


def test_x_n_is_standard_sequence(g11, g14):
    for n in range(0, 4):
        assert g11.x(n) == [btree.standard_sequence(g11.ctx, 0, n)]
    for n in range(1, 4):
        M = btree.standard_sequence(g14.ctx, 1, n)
        assert g14.x(n) == [M.outer, M.inner]
    assert g14.x(0) == g14.base


# operators at p ----------------------------------------------------------------------

def test_p_operator_is_brandt_at_p(g11, phi11):
    assert gp.p_operator_matrices(g11)["T"] == Q.brandt_matrix(g11.class_set, 3)
    assert gp.p_eigenvalue(g11, phi11) == -1
    assert not gp.is_p_new(g11, phi11)


def test_p_new_operators(g14, phi14):
    mats = gp.p_operator_matrices(g14)
    assert mats["Tl"] == mats["Tu"]
    assert all(sum(r) == 7 for r in mats["Tl"])
    assert gp.is_p_new(g14, phi14)
    assert gp.p_eigenvalue(g14, phi14) == -1


# points -------------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["g11", "g14"])
def test_star_act_independent_of_ideal(name, request):
    g = request.getfixturevalue(name)
    for n in (1, 2):
        G = g.group(n)
        for A in G.elements[:10]:
            a = star_act_idx(g, A, n)
            b = gp.star_act(g, A, n, ideal=other_ideal(G, A, g.avoid)).class_index
            assert a == b


def star_act_idx(g, A, n):
    return gp.star_act(g, A, n).class_index


def test_star_act_rejects_wrong_ideal(g11):
    G = g11.group(1)
    A, B = G.elements[0], G.elements[1]
    with pytest.raises(ValueError):
        gp.star_act(g11, A, 1, ideal=G.ideal_rep(B))


@pytest.mark.parametrize("name,n", [("g11", 0), ("g11", 1), ("g11", 2), ("g14", 1), ("g14", 2)])
def test_conductors(name, n, request):
    rep = gp.verify_conductors(request.getfixturevalue(name), n)
    assert rep["ok"], rep["counterexample"]
    assert rep["checked"] == len(request.getfixturevalue(name).group(n))


def test_point_ideals_have_right_norm_shape(g11):
    for A in g11.group(2).elements[:6]:
        pt = gp.star_act(g11, A, 2)
        assert pt.right_ideal.right_order_ok()
        assert pt.right_ideal.left_order().discriminant() == 11


@pytest.mark.parametrize("name", ["g11", "g14"])
def test_kernel_bridge(name, request):
    g = request.getfixturevalue(name)
    for n in (1, 2):
        ok, mapping = gp.verify_kernel_bridge(g, n)
        assert ok
        assert len(mapping) == len(g.tower(n - 1).kernel)


def test_global_trace_level_one(g11, phi11, g14, phi14):
    assert gp.verify_global_trace(g11, phi11, 1)["ok"]
    assert gp.verify_global_trace(g14, phi14, 1, ap=phi14.ap)["ok"]


def test_global_trace_detects_wrong_sign(g14, phi14):
    # alpha = +1 (the value of a_7 for the elliptic curve) is not the eigenvalue on the p-new line
    rep = gp.verify_global_trace(g14, phi14, 1, ap=1)
    assert not rep["ok"]
    assert rep["counterexample"] is not None


def test_evaluation_table_values(g11, phi11):
    t = gp.evaluation_table(phi11, g11, 1)
    assert set(t) == set(g11.group(1).elements)
    assert set(t.values()) <= set(phi11.values)
