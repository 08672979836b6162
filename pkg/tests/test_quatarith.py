from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from anticyc import quatarith as Q
from anticyc._nt import factor, kronecker, primes_up_to

from conftest import count_points_ap

E11 = (0, -1, 1, -10, -20)
E14 = (1, 0, 1, 4, -6)


@lru_cache(maxsize=None)
def order_for(disc, level):
    O = Q.maximal_order(Q.build_algebra(disc))
    return Q.eichler_order(O, level) if level > 1 else O


@lru_cache(maxsize=None)
def classes(disc, level):
    return Q.right_ideal_class_set(order_for(disc, level))


def eichler_class_number(disc, level):
    """Eichler's class number formula, independent of any ideal enumeration."""
    qs = factor(disc) if disc > 1 else {}
    ls = factor(level) if level > 1 else {}
    h = Q.eichler_mass(disc, level)
    for d, w in ((-4, Fraction(1, 4)), (-3, Fraction(1, 3))):
        t = w
        for q in qs:
            t *= 1 - kronecker(d, q)
        for l in ls:
            t *= 1 + kronecker(d, l)
        h += t
    return h


elements = st.tuples(*[st.integers(-6, 6)] * 4)


# the algebra ---------------------------------------------------------------

@pytest.mark.parametrize("disc", [2, 3, 5, 7, 11, 13, 30])
def test_build_algebra_ramification(disc):
    B = Q.build_algebra(disc)
    assert B.disc == disc
    for q in primes_up_to(40):
        assert B.hilbert(q) == (-1 if disc % q == 0 else 1)
    assert B.hilbert(-1) == -1


def test_build_algebra_rejects():
    for d in (0, 4, 6, 18):
        with pytest.raises(ValueError):
            Q.build_algebra(d)
    with pytest.raises(ValueError):
        Q.QuaternionAlgebra(1, -1)


@given(elements, elements, elements)
def test_algebra_axioms(x, y, z):
    B = Q.build_algebra(11)
    assert B.mul(B.mul(x, y), z) == B.mul(x, B.mul(y, z))
    assert B.nrd(B.mul(x, y)) == B.nrd(x) * B.nrd(y)
    assert B.mul(x, B.conj(x)) == (B.nrd(x), 0, 0, 0)
    assert B.conj(B.mul(x, y)) == B.mul(B.conj(y), B.conj(x))
    assert B.nrd(x) >= 0 and (B.nrd(x) == 0) == (not any(x))


# maximal and Eichler orders ------------------------------------------------------

@pytest.mark.parametrize("disc", [2, 3, 5, 11])
def test_maximal_order(disc):
    O = order_for(disc, 1)
    assert O.is_order()
    assert O.discriminant() == disc


@given(elements, elements)
def test_frame_matches_algebra(x, y):
    O = order_for(11, 1)
    fr = O.frame
    B = O.B
    assert fr.to_B(fr.mul(x, y)) == tuple(Fraction(t) for t in B.mul(fr.to_B(x), fr.to_B(y)))
    assert fr.nrd(x) == B.nrd(fr.to_B(x))
    assert fr.trd(x) == B.trd(fr.to_B(x))
    assert fr.to_B(fr.conj(x)) == tuple(Fraction(t) for t in B.conj(fr.to_B(x)))


@pytest.mark.parametrize("disc,level", [(2, 7), (2, 5), (11, 3), (3, 7)])
def test_eichler_order(disc, level):
    R = order_for(disc, level)
    assert R.is_order()
    assert R.discriminant() == disc * level
    O, O2 = R.maximal, R.overorders[level]
    assert O.discriminant() == O2.discriminant() == disc
    assert O.lattice != O2.lattice
    assert all(O.contains(x) and O2.contains(x) for x in R.basis())
    # R is the full intersection: index in O is level
    assert R.lattice.covolume() == level * O.lattice.covolume()


def test_eichler_order_errors():
    O = order_for(2, 1)
    with pytest.raises(ValueError):
        Q.eichler_order(O, 9)
    with pytest.raises(ValueError):
        Q.eichler_order(O, 14)


def test_eichler_order_containing_embedding():
    O = order_for(2, 1)
    emb = Q.optimal_embedding(O, -19)
    R = Q.eichler_order(O, 7, omega=emb.q)
    assert R.contains(emb.q)
    assert Q.optimal_embedding(R, -19).conductor_in(R.lattice) == 1


# ideals -------------------------------------------------------------------------------

@given(elements.filter(any))
def test_principal_ideal(x):
    R = order_for(11, 1)
    I = Q.principal_right_ideal(R, x)
    assert I.norm() == R.frame.nrd(x)
    assert I.right_order_ok()
    ok, w = Q.is_equivalent(I, Q.unit_ideal(R))
    assert ok and R.frame.nrd(w) == I.norm()


def test_left_orders_are_maximal_of_same_discriminant():
    cs = classes(11, 1)
    for I in cs.reps:
        L = I.left_order()
        assert L.is_order() and L.discriminant() == 11
        assert I.right_order_ok()


def test_equivalence_is_class_invariant():
    cs = classes(11, 1)
    R = cs.order
    I = cs.reps[1]
    x = (1, 2, 0, 1)
    J = Q.left_multiply(R, [x], I)
    ok, w = Q.is_equivalent(J, I)
    assert ok and Q.left_multiply(R, [w], I) == J
    assert not Q.is_equivalent(cs.reps[0], cs.reps[1])[0]


# class sets and Brandt matrices -------------------------------------------------

@pytest.mark.parametrize("disc,level", [(2, 1), (11, 1), (2, 7), (2, 5), (3, 1), (5, 1), (7, 1), (13, 1)])
def test_class_set_mass_and_class_number(disc, level):
    cs = classes(disc, level)
    assert cs.mass() == Q.eichler_mass(disc, level)
    assert len(cs) == eichler_class_number(disc, level)
    for I, w in zip(cs.reps, cs.weights):
        assert w == I.left_order().unit_count() // 2


def test_reference_weights():
    assert sorted(classes(11, 1).weights) == [2, 3]
    assert classes(2, 1).weights == [12]
    assert classes(2, 7).weights == [3, 3]


def test_classify_rejects_foreign_order():
    cs = classes(11, 1)
    other = Q.unit_ideal(order_for(2, 1))
    with pytest.raises(Q.ClassSetError):
        cs.classify(other)


@pytest.mark.parametrize("disc,level", [(2, 1), (11, 1), (2, 7)])
def test_brandt_matrices_row_sums_commute_and_symmetry(disc, level):
    cs = classes(disc, level)
    ells = [l for l in primes_up_to(13) if (disc * level) % l]
    mats = {l: Q.brandt_matrix(cs, l) for l in ells}
    h = len(cs)
    w = cs.weights
    for l, B in mats.items():
        assert all(sum(row) == l + 1 for row in B)
        for i in range(h):
            for j in range(h):
                assert w[j] * B[i][j] == w[i] * B[j][i]
    for l1 in ells:
        for l2 in ells:
            A, B = mats[l1], mats[l2]
            AB = [[sum(A[i][k] * B[k][j] for k in range(h)) for j in range(h)] for i in range(h)]
            BA = [[sum(B[i][k] * A[k][j] for k in range(h)) for j in range(h)] for i in range(h)]
            assert AB == BA


def test_brandt_rejects_bad_prime():
    with pytest.raises(ValueError):
        Q.brandt_matrix(classes(11, 1), 11)


@pytest.mark.parametrize("ell", [l for l in primes_up_to(50) if l != 11])
def test_brandt_trace_matches_point_count_11(ell):
    # h = 2: Eisenstein (ell + 1) plus the newform of level 11
    B = Q.brandt_matrix(classes(11, 1), ell)
    assert B[0][0] + B[1][1] == ell + 1 + count_points_ap(E11, ell)


@pytest.mark.parametrize("ell", [3, 5, 11, 13])
def test_brandt_trace_matches_point_count_14(ell):
    B = Q.brandt_matrix(classes(2, 7), ell)
    assert B[0][0] + B[1][1] == ell + 1 + count_points_ap(E14, ell)


# local splitting ------------------------------------------------------------------

@pytest.fixture(scope="module")
def split11():
    O = order_for(11, 1)
    return O, Q.LocalSplitting(O, 3, 6)


@given(elements, elements)
def test_splitting_is_a_ring_map(split11, x, y):
    O, S = split11
    fr = O.frame
    P = S.mod
    mx, my, mxy = S(x), S(y), S(fr.mul(x, y))
    prod_ = [[sum(mx[i][k] * my[k][j] for k in range(2)) % P for j in range(2)] for i in range(2)]
    assert [list(r) for r in mxy] == prod_
    assert (mx[0][0] * mx[1][1] - mx[0][1] * mx[1][0] - fr.nrd(x)) % P == 0
    assert (mx[0][0] + mx[1][1] - fr.trd(x)) % P == 0


def test_splitting_maps_order_onto_matrices(split11):
    O, S = split11
    mats = [S(r) for r in O.basis()]
    # the images span M_2(Z/3) mod 3
    rows = [[m[0][0] % 3, m[0][1] % 3, m[1][0] % 3, m[1][1] % 3] for m in mats]
    from anticyc._intlin import kernel_mod
    assert len([v for v in kernel_mod([list(c) for c in zip(*rows)], 3, 4) if any(x % 3 for x in v)]) == 0


def test_local_splitting_level_p_base():
    O = order_for(2, 1)
    emb = Q.optimal_embedding(O, -19)
    R = Q.eichler_order(O, 7, omega=emb.q)
    S, base, ctx = Q.local_splitting(R, 7, 10, omega=emb.q, dK=-19)
    assert len(base) == 2
    assert base[0].contains(base[1])
    assert S(emb.q) == tuple(tuple(v % S.mod for v in row) for row in ctx.W)


# embeddings -------------------------------------------------------------------------

@pytest.mark.parametrize("disc,level,dK", [(11, 1, -20), (2, 7, -19), (11, 1, -4), (2, 1, -20), (3, 1, -4), (5, 1, -3)])
def test_optimal_embedding(disc, level, dK):
    R = order_for(disc, level)
    e = Q.optimal_embedding(R, dK)
    fr = R.frame
    assert fr.trd(e.q) == dK
    assert fr.nrd(e.q) == (dK * dK - dK) // 4
    assert e.conductor_in(R.lattice) == 1
    assert e.image((1, 0)) == fr.one


@pytest.mark.parametrize("disc,level,dK,bad", [(11, 1, -19, 11), (2, 7, -4, 7), (2, 1, -7, 2), (3, 1, -20, 3)])
def test_embedding_obstruction(disc, level, dK, bad):
    assert Q.embedding_obstruction(disc, level, dK) == bad
    with pytest.raises(Q.NoEmbedding):
        Q.optimal_embedding(order_for(disc, level), dK)
