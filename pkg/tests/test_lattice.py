from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wonderful.errors import InputError
from wonderful.lattice import (Cone, Fan, FiniteAbelianGroup, cokernel, cone_preimage, determinant,
                               dual_cone, inverse, is_refinement, matmul, matrix_from_json,
                               matrix_to_json, nullspace, parallelepiped_points, primitive, rank,
                               simplicial_pieces, smith_normal_form, solve)

from oracles import cokernel_free_rank, det, invariant_factors

small_int = st.integers(-6, 6)


def int_matrix(max_rows=3, max_cols=3):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_int, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_exact_inputs_only():
    with pytest.raises(InputError):
        Cone(1, ((0.5,),))
    assert primitive((Fraction(1, 2), Fraction(3, 2))) == (1, 3)
    assert matrix_from_json([["1/2", 3]]) == ((Fraction(1, 2), 3),)
    assert matrix_to_json(((Fraction(1, 2), 3),)) == [["1/2", 3]]


def test_snf_worked_example():
    assert smith_normal_form([[2, 0], [0, 3]]).diagonal == (1, 6)
    free, tors = cokernel([[2, 0], [0, 3]])
    assert free == 0 and tors.invariant_factors == (6,)
    assert str(tors) == "Z/6"


@given(int_matrix())
@settings(max_examples=150, deadline=None)
def test_snf_matches_determinantal_divisors(m):
    snf = smith_normal_form(m)
    assert matmul(matmul(snf.U, [list(r) for r in m]), snf.V) == snf.D
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
    free, tors = cokernel(m)
    assert list(tors.invariant_factors) == invariant_factors(m)
    assert free == cokernel_free_rank(m)


def test_finite_abelian_group_validation():
    with pytest.raises(InputError):
        FiniteAbelianGroup((4, 2))
    assert FiniteAbelianGroup.from_orders([2, 3, 4]).invariant_factors == (2, 12)
    assert FiniteAbelianGroup(()).is_trivial
    assert str(FiniteAbelianGroup(())) == "trivial"


@given(int_matrix(3, 3))
@settings(max_examples=100, deadline=None)
def test_rank_nullspace(m):
    ns = nullspace(m)
    assert rank(m) + len(ns) == len(m[0])
    for v in ns:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


@given(st.lists(st.lists(small_int, min_size=2, max_size=2), min_size=2, max_size=2))
def test_inverse_and_solve(m):
    if det(m) == 0:
        assert solve(m, (1, 1)) is None or rank(m) < 2
        return
    inv = inverse(m)
    assert matmul(inv, m) == ((1, 0), (0, 1))
    x = solve(m, (1, 2))
    assert [sum(a * b for a, b in zip(row, x)) for row in m] == [1, 2]


def test_dual_cone_example():
    c = Cone(2, ((1, 0), (1, 2)))
    assert set(dual_cone(c).rays) == {(0, 1), (2, -1)}


def test_halfplane_preimage_and_lineality():
    half = Cone.from_inequalities(2, [(0, 1)])
    assert half.lineality_dim == 1 and not half.is_pointed
    pre = cone_preimage(half, ((1, 1), (0, 1)))
    assert pre.contains((5, 1)) and not pre.contains((0, -1))


@given(st.lists(st.tuples(small_int, small_int, small_int), min_size=1, max_size=5))
@settings(max_examples=80, deadline=None)
def test_double_dual_and_duality_pairing(gens):
    gens = [g for g in gens if any(g)]
    if not gens:
        return
    c = Cone(3, tuple(gens))
    d = c.dual()
    assert d.dual() == c
    for u in d.canonical_generators():
        for v in c.canonical_generators():
            assert sum(a * b for a, b in zip(u, v)) >= 0


@given(st.lists(st.tuples(small_int, small_int), min_size=1, max_size=4))
@settings(max_examples=80, deadline=None)
def test_faces_are_faces(gens):
    gens = [g for g in gens if any(g)]
    if not gens:
        return
    c = Cone(2, tuple(gens))
    for f in c.faces:
        assert f.is_face_of(c)
        assert c.contains_cone(f)


def test_fan_validity_and_refinement():
    quad = Cone(2, ((1, 0), (0, 1)))
    split = [Cone(2, ((1, 0), (1, 1))), Cone(2, ((1, 1), (0, 1)))]
    coarse = Fan.from_cones(2, [quad])
    fine = Fan.from_cones(2, split)
    assert coarse.is_valid() and fine.is_valid()
    assert is_refinement(fine, coarse)
    assert not is_refinement(coarse, fine)
    overlap = Fan.from_cones(2, [quad, Cone(2, ((1, 1), (-1, 1)))])
    assert not overlap.is_valid()


def test_parallelepiped_points_count_is_index():
    basis = [(1, 0), (1, 3)]
    pts = parallelepiped_points(basis)
    assert len(pts) == 3
    assert (0, 0) in pts


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=2, max_size=4))
@settings(max_examples=60, deadline=None)
def test_simplicial_pieces_cover(gens):
    gens = [g for g in gens if any(g)]
    if len(gens) < 2 or rank(gens) < 2:
        return
    c = Cone(2, tuple(gens))
    pieces = simplicial_pieces(c)
    for p in pieces:
        assert rank(p) == len(p)
        assert all(c.contains(v) for v in p)
    for v in c.canonical_generators():
        assert any(Cone(2, p).contains(v) for p in pieces)
