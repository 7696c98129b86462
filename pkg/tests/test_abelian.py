"""
Tests for exact integer linear algebra and finite abelian groups
"""

import pytest
from hypothesis import given, settings, strategies as st

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.core.abelian import (
    FpGroup, Subgroup, determinant, hermite_normal_form, identity_matrix, int_matrix,
    kernel_generators, present, quotient_presentation, smith_normal_form, solve_combination,
    subgroup_closure, subgroup_intersection, tensor_over_z, zero_matrix
)
from src.core.errors import MalformedElementError


def _is_smith(d) -> bool:
    rows, cols = d.shape
    for i in range(rows):
        for j in range(cols):
            if i != j and d[i, j] != 0:
                return False
    diagonal = [d[i, i] for i in range(min(rows, cols))]
    if any(x < 0 for x in diagonal):
        return False
    for a, b in zip(diagonal, diagonal[1:]):
        if a == 0 and b != 0:
            return False
        if a and b % a:
            return False
    return True


class TestSmithNormalForm:
    """Test Smith normal form"""

    def test_diagonal_2_3(self):
        """diag(2, 3) becomes diag(1, 6)"""
        m = int_matrix([[2, 0], [0, 3]])
        u, d, v = smith_normal_form(m)
        assert (u.dot(m).dot(v) == d).all()
        assert d[0, 0] == 1 and d[1, 1] == 6
        assert d[0, 1] == 0 and d[1, 0] == 0

    def test_identity_is_fixed(self):
        """An identity matrix is already in normal form"""
        m = identity_matrix(3)
        _, d, _ = smith_normal_form(m)
        assert (d == identity_matrix(3)).all()

    def test_zero_matrix(self):
        """The zero matrix stays zero"""
        m = zero_matrix(2, 2)
        u, d, v = smith_normal_form(m)
        assert (d == zero_matrix(2, 2)).all()
        assert (u.dot(m).dot(v) == d).all()

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 6).flatmap(
        lambda cols: st.lists(st.lists(st.integers(-9, 9), min_size=cols, max_size=cols), min_size=1, max_size=6)))
    def test_random_matrices(self, rows):
        """U·m·V = D with unimodular U, V and a divisibility chain on D"""
        m = int_matrix(rows)
        u, d, v = smith_normal_form(m)
        assert (u.dot(m).dot(v) == d).all()
        assert abs(determinant(u)) == 1
        assert abs(determinant(v)) == 1
        assert _is_smith(d)


class TestHermiteNormalForm:
    """Test the canonical lattice basis"""

    def test_same_lattice_same_form(self):
        """Different generators of one lattice give one Hermite form"""
        a = hermite_normal_form(int_matrix([[4, 0], [0, 6], [2, 3]]), 2)
        b = hermite_normal_form(int_matrix([[2, 3], [0, 6], [4, 6]]), 2)
        assert (a == b).all()

    def test_rank_deficient_rejected(self):
        """Lattices of lower rank give an infinite quotient"""
        with pytest.raises(MalformedElementError):
            hermite_normal_form(int_matrix([[1, 1], [2, 2]]), 2)

    def test_determinant(self):
        """Exact determinant"""
        assert determinant(int_matrix([[2, 1], [1, 3]])) == 5
        assert determinant(int_matrix([[1, 2], [2, 4]])) == 0


class TestFpGroup:
    """Test FpGroup"""

    def test_divisibility_chain_required(self):
        """Invariant factors must divide each other"""
        assert FpGroup((3, 6)).order == 18
        with pytest.raises(MalformedElementError):
            FpGroup((4, 6))
        with pytest.raises(MalformedElementError):
            FpGroup((1,))

    def test_from_orders_normalizes(self):
        """Z/2 + Z/3 is Z/6"""
        assert FpGroup.from_orders([2, 3]).invariant_factors == (6,)
        assert FpGroup.from_orders([2, 4]).invariant_factors == (2, 4)

    def test_element_validation(self):
        """Coordinates are reduced and their count checked"""
        g = FpGroup((2, 4))
        assert g.element([3, 5]) == (1, 1)
        with pytest.raises(MalformedElementError):
            g.element([1])

    def test_order_of(self):
        g = FpGroup((2, 4))
        assert g.order_of((1, 2)) == 2
        assert g.order_of((0, 1)) == 4
        assert g.order_of(g.zero) == 1


class TestPresentations:
    """Test quotient presentations"""

    def test_cyclic_quotient(self):
        """Z/4 modulo 2 is Z/2"""
        assert present((4,), [(2,)]).group.invariant_factors == (2,)

    def test_empty_relations(self):
        """Z/6 with no relations is Z/6"""
        assert present((6,), []).group.invariant_factors == (6,)

    def test_diagonal_relation(self):
        """(Z/2)^2 modulo (1, 1) is Z/2"""
        q = quotient_presentation(FpGroup((2, 2)), [(1, 1)])
        assert q.group.invariant_factors == (2,)
        assert q.project((1, 0)) == q.project((0, 1))
        assert q.is_zero((1, 1))

    def test_lift_is_a_section(self):
        """project(lift(y)) = y"""
        q = present((4, 6), [(2, 3)])
        for y in q.group.elements():
            assert q.project(q.lift(y)) == tuple(y)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_order_matches_relation_subgroup(self, data):
        """|G / <rels>| = |G| / |<rels>|"""
        factors = data.draw(st.sampled_from([(2,), (4,), (6,), (2, 4), (3, 6), (2, 2, 4), (2, 6, 12)]))
        ambient = FpGroup(factors)
        element = st.tuples(*(st.integers(0, d - 1) for d in factors))
        relations = data.draw(st.lists(element, max_size=3))
        q = quotient_presentation(ambient, relations)
        assert q.group.order == ambient.order // subgroup_closure(ambient, relations).order
        assert all(q.is_zero(rel) for rel in relations)


class TestTensorOverZ:
    """Test tensor products of groups"""

    def test_coprime_orders(self):
        """Z/2 (x) Z/3 is trivial"""
        assert tensor_over_z(FpGroup((2,)), FpGroup((3,))).group.order == 1

    def test_gcd(self):
        """Z/2 (x) Z/2 is Z/2"""
        assert tensor_over_z(FpGroup((2,)), FpGroup((2,))).group.invariant_factors == (2,)

    def test_four_summands(self):
        """(Z/2)^2 (x) (Z/2)^2 has order 16"""
        assert tensor_over_z(FpGroup((2, 2)), FpGroup((2, 2))).group.order == 16

    def test_pure_tensors_are_bilinear(self):
        t = tensor_over_z(FpGroup((4,)), FpGroup((6,)))
        g = t.group
        assert g.invariant_factors == (2,)
        assert t.pure_tensor((1,), (2,)) == g.add(t.pure_tensor((1,), (1,)), t.pure_tensor((1,), (1,)))


class TestSubgroups:
    """Test subgroup closure, membership and intersections"""

    def test_empty_generators(self):
        """No generators span the zero subgroup"""
        assert Subgroup(FpGroup((12,)), []).elements == ((0,),)

    def test_cyclic_closure(self):
        """4 spans {0, 4, 8} in Z/12"""
        assert subgroup_closure(FpGroup((12,)), [(4,)]).elements == ((0,), (4,), (8,))

    def test_generators_span_group(self):
        group = FpGroup((2, 2))
        sub = subgroup_closure(group, [(1, 0), (0, 1)])
        assert sub.order == 4
        assert sub.index == 1

    def test_membership_and_equality(self):
        group = FpGroup((12,))
        a = subgroup_closure(group, [(8,)])
        b = subgroup_closure(group, [(4,)])
        assert a == b
        assert a.contains((4,))
        assert not a.contains((2,))
        assert a.issubset(subgroup_closure(group, [(2,)]))

    def test_intersection(self):
        """<2> and <3> meet in <6> inside Z/12"""
        group = FpGroup((12,))
        meet = subgroup_intersection(subgroup_closure(group, [(2,)]), subgroup_closure(group, [(3,)]))
        assert meet == subgroup_closure(group, [(6,)])

    def test_presentation_coordinates(self):
        """Subgroup coordinates round-trip through embed"""
        sub = subgroup_closure(FpGroup((4, 4)), [(2, 0), (0, 2), (1, 1)])
        p = sub.presentation()
        assert p.group.order == sub.order
        for x in sub.elements:
            assert p.embed(p.coordinates(x)) == x


class TestSolving:
    """Test kernels and linear solving"""

    def test_kernel_of_reduction(self):
        """Z/12 -> Z/4, 1 -> 1 has kernel <4>"""
        gens = kernel_generators(FpGroup((12,)), [(1,)], (4,))
        assert subgroup_closure(FpGroup((12,)), gens) == subgroup_closure(FpGroup((12,)), [(4,)])

    def test_solve_combination(self):
        group = FpGroup((12,))
        coeffs = solve_combination(group, [(4,), (6,)], (2,))
        assert coeffs is not None
        assert (4 * coeffs[0] + 6 * coeffs[1]) % 12 == 2
        assert solve_combination(group, [(4,)], (2,)) is None
