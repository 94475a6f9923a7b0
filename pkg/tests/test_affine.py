from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wonderful.affine import (AffineCharacter, AffineRootDatum, action_invariant, affine_dynkin,
                              affine_generators, affine_weyl_action, affine_weyl_enumerate, alcove,
                              coset_representatives, fold_to_alcove, identity_element,
                              levi_center, levi_center_quotient, parabolic_subgroup,
                              parahoric_levi_type)
from wonderful.errors import CapExceededError, InputError
from wonderful.roots import basic_form, build_root_datum

TYPES = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2", "F4", "E6"]


def ard_of(name, flavor="sc"):
    return AffineRootDatum(build_root_datum(name, flavor=flavor))


def test_so5_diagram_and_alcove():
    ard = ard_of("B2")
    assert ard.affine_cartan == ((2, 0, -1), (0, 2, -1), (-2, -2, 2))
    d = affine_dynkin(ard)
    assert d.bonds == ((0, 2, 2, "0->2"), (1, 2, 2, "1->2"))
    assert d.automorphisms == ((0, 1, 2), (1, 0, 2))
    al = alcove(ard)
    assert {f.equation() for f in al.facets} == {"y = x", "y = x/2", "y = 1/2"}
    assert dict(al.vertices) == {0: (0, 0), 1: (1, Fraction(1, 2)), 2: (Fraction(1, 2), Fraction(1, 2))}


def test_so5_parahorics():
    ard = ard_of("B2")
    assert [parahoric_levi_type(ard, j) for j in ard.nodes] == ["B2", "B2", "A1xA1"]
    assert [levi_center_quotient(ard, j).invariant_factors for j in ard.nodes] == [(), (), (2,)]
    assert levi_center(ard, 2).order == 4


@pytest.mark.parametrize("name", TYPES)
def test_marks_null_vector_and_zj_orders(name):
    ard = ard_of(name)
    a = ard.affine_cartan
    n = len(a)
    assert all(sum(a[i][j] * ard.marks[j] for j in range(n)) == 0 for i in range(n))
    assert all(sum(ard.comarks[i] * a[i][j] for i in range(n)) == 0 for j in range(n))
    # |Z_j| is the mark a_j
    assert [levi_center_quotient(ard, j).order for j in ard.nodes] == list(ard.marks)


@pytest.mark.parametrize("name,order", [("A1", 2), ("A2", 6), ("A3", 8), ("B2", 2), ("B3", 2),
                                        ("C3", 2), ("D4", 24), ("G2", 1), ("F4", 1), ("E6", 6)])
def test_affine_diagram_automorphism_groups(name, order):
    assert affine_dynkin(ard_of(name)).automorphism_group_order == order


def test_alcove_vertices_on_walls():
    for name in TYPES:
        ard = ard_of(name)
        al = alcove(ard)
        assert al.interior_contains(al.barycenter)
        for j, v in al.vertices:
            assert al.contains(v)
            assert [f.value(v) == 0 for f in al.facets].count(False) == 1


def test_affine_weyl_small_counts():
    assert len(affine_weyl_enumerate(ard_of("A1"), 2)) == 5
    # growth series of affine A2 is 1, 3, 6, 9, ...
    els = affine_weyl_enumerate(ard_of("A2"), 3)
    assert [sum(1 for g in els if g.length == k) for k in range(4)] == [1, 3, 6, 9]
    with pytest.raises(CapExceededError):
        affine_weyl_enumerate(ard_of("A1"), 100)


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
def test_coxeter_relations(name):
    ard = ard_of(name)
    a = ard.affine_cartan
    gens = affine_generators(ard)
    e = identity_element(ard)
    m_of = {0: 2, 1: 3, 2: 4, 3: 6}
    for i in ard.nodes:
        assert gens[i] * gens[i] == e
        for j in ard.nodes:
            if i < j and a[i][j] * a[j][i] < 4:
                m = m_of[a[i][j] * a[j][i]]
                p = e
                for _ in range(m):
                    p = p * gens[i] * gens[j]
                assert p == e


def test_cosets_and_parabolics():
    a1 = ard_of("A1")
    assert [g.word for g in coset_representatives(a1, {1}, 2)] == [(), (0,), (1, 0)]
    b2 = ard_of("B2")
    assert len(parabolic_subgroup(b2, {1, 2})) == 8
    assert len(parabolic_subgroup(b2, {0, 1})) == 4
    assert len(parabolic_subgroup(b2, {0, 2})) == 8
    with pytest.raises(InputError):
        parabolic_subgroup(b2, {0, 1, 2})
    # every element of length <= 4 factors uniquely as (minimal rep) * (element of W_J)
    J = {1, 2}
    reps = coset_representatives(b2, J, 4)
    wj = parabolic_subgroup(b2, J)
    everything = {g for g in affine_weyl_enumerate(b2, 4)}
    products = {}
    for r in reps:
        for w in wj:
            g = r * w
            if g in everything:
                assert g not in products
                products[g] = (r, w)
    assert set(products) == everything


@given(st.sampled_from(["A2", "B2", "G2"]),
       st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=7), min_size=2, max_size=2))
@settings(max_examples=60, deadline=None)
def test_fold_to_alcove(name, zeta):
    ard = ard_of(name)
    g, p = fold_to_alcove(ard, tuple(zeta))
    assert alcove(ard).contains(p)
    assert g.apply(tuple(zeta)) == p


def test_affine_action_example():
    ard = ard_of("A1")
    chi = AffineCharacter(0, (0,), 1)
    assert affine_weyl_action(ard, (1,), chi) == AffineCharacter(-1, (2,), 1)


char_entries = st.integers(-20, 20)


@given(st.sampled_from(["A1", "A2", "B2", "G2"]), st.data())
@settings(max_examples=80, deadline=None)
def test_affine_action_properties(name, data):
    ard = ard_of(name)
    r = ard.rank
    q = basic_form(ard.base)
    vec = st.lists(char_entries, min_size=r, max_size=r).map(tuple)
    chi = AffineCharacter(data.draw(char_entries), data.draw(vec), data.draw(st.integers(-3, 3)))
    e1, e2 = data.draw(vec), data.draw(vec)
    out = affine_weyl_action(ard, e1, chi)
    assert out.h == chi.h
    assert action_invariant(q, out) == action_invariant(q, chi)
    summed = affine_weyl_action(ard, tuple(x + y for x, y in zip(e1, e2)), chi)
    assert summed == affine_weyl_action(ard, e1, affine_weyl_action(ard, e2, chi))
    flat = AffineCharacter(chi.n, chi.lam, 0)
    moved = affine_weyl_action(ard, e1, flat)
    assert moved.lam == flat.lam
    assert moved.n == flat.n - sum(x * y for x, y in zip(flat.lam, e1))
