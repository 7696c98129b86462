"""
Tests for finite rings, ring maps, ideals and modules
"""

import itertools
from unittest import mock

import pytest
from hypothesis import given, settings, strategies as st

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.core.abelian import FpGroup
from src.core.errors import (
    CapExceededError, MapValidationError, RingAxiomError, RingConstructionError, SpecFormatError
)
from src.core.limits import ComputeLimits
from src.core.rings import (
    FiniteModule, FiniteRing, Ideal, annihilator, colon_ideal, compose, diagonal_map, enumerate_ideals,
    find_isomorphism, ideal_from, ideal_intersect, ideal_product, ideal_sum, identity_map,
    inclusion_map, is_faithful, make_map, make_ring, module_colon, poly_quotient, product,
    product_element, projection_map, quotient, quotient_map, quotient_module, regular_module,
    restriction_module, ring_homomorphisms, zmod
)


def _generator(ring):
    return ring.construction.extra["generator"]


SMALL_RINGS = [
    zmod(2), zmod(4), zmod(6), zmod(8),
    product([zmod(2), zmod(2)]),
    poly_quotient(zmod(2), [0, 0, 1]),
    poly_quotient(zmod(2), [1, 1, 1]),
]


class TestConstructions:
    """Test ring constructors"""

    def test_zmod(self):
        ring = zmod(6)
        assert ring.order == 6
        assert ring.characteristic == 6
        assert ring.mul((5,), (5,)) == (1,)

    def test_zero_ring(self):
        ring = zmod(1)
        assert ring.order == 1
        assert ring.is_zero_ring()
        assert not ring.is_field()

    def test_bad_modulus(self):
        with pytest.raises(RingConstructionError):
            zmod(0)

    def test_dual_numbers(self):
        """Z/2[t]/(t^2) has basis 1, t and t^2 = 0"""
        ring = poly_quotient(zmod(2), [0, 0, 1])
        t = _generator(ring)
        assert ring.order == 4
        assert ring.mul(t, t) == ring.zero
        assert t != ring.zero and t != ring.one
        assert ring.is_nilpotent(t)
        assert ring.is_local()

    def test_field_of_four(self):
        ring = poly_quotient(zmod(2), [1, 1, 1])
        assert ring.is_field()
        assert len(ring.units()) == 3

    def test_nonunit_leading_coefficient(self):
        """A modulus without a unit leading coefficient has no finite basis"""
        with pytest.raises(RingConstructionError):
            poly_quotient(zmod(4), [1, 2])

    def test_product_is_zmod6(self):
        """Z/2 x Z/3 is isomorphic to Z/6"""
        p = product([zmod(2), zmod(3)])
        assert p.order == 6
        assert find_isomorphism(zmod(6), p) is not None

    def test_quotient(self):
        ring = quotient(zmod(12), [4])
        assert ring.order == 4
        assert quotient_map(ring).is_surjective()

    def test_axioms_checked(self):
        """A table with 1 * 1 = 2 is rejected"""
        with pytest.raises(RingAxiomError) as info:
            FiniteRing(FpGroup((4,)), [[[2]]], (1,))
        assert info.value.axiom == "identity"

    @pytest.mark.parametrize("build", [
        lambda: product([zmod(2), zmod(3)]),
        lambda: poly_quotient(zmod(2), [1, 1, 1]),
        lambda: quotient(zmod(12), [4]),
    ])
    def test_derived_rings_are_checked(self, build):
        """Products and quotients run the axiom check on the table they build"""
        with mock.patch.object(FiniteRing, "_check_axioms", autospec=True) as checked:
            ring = build()
        assert any(call.args[0] is ring for call in checked.call_args_list)

    def test_local_and_units(self):
        assert zmod(4).is_local()
        assert not zmod(6).is_local()
        assert len(zmod(12).units()) == 4
        assert zmod(5).is_field()
        assert not zmod(4).is_field()


class TestRingDescriptions:
    """Test JSON ring descriptions"""

    def test_nested_description(self):
        spec = {"type": "product", "factors": [{"type": "zmod", "n": 2}, {"type": "zmod", "n": 3}]}
        ring = make_ring(spec)
        assert ring.order == 6
        assert ring.description == spec

    def test_poly_quotient_description_round_trip(self):
        ring = poly_quotient(zmod(3), [1, 0, 1])
        assert make_ring(ring.description) == ring

    def test_unknown_type(self):
        with pytest.raises(SpecFormatError):
            make_ring({"type": "field", "q": 4})

    def test_missing_key(self):
        with pytest.raises(SpecFormatError):
            make_ring({"type": "zmod"})

    def test_not_an_object(self):
        with pytest.raises(SpecFormatError):
            make_ring([2])


class TestRingMaps:
    """Test RingMap validation and canonical maps"""

    def test_identity(self):
        ring = zmod(6)
        assert make_map(ring, ring, [1]) == identity_map(ring)

    def test_reduction(self):
        """Z/4 -> Z/2, 1 -> 1"""
        phi = make_map(zmod(4), zmod(2), [1])
        assert phi.is_surjective()
        assert not phi.is_injective()
        assert phi.kernel() == ideal_from(zmod(4), [2])

    def test_not_additive(self):
        """Z/2 -> Z/4, 1 -> 1 breaks 2 * 1 = 0"""
        with pytest.raises(MapValidationError) as info:
            make_map(zmod(2), zmod(4), [1])
        assert info.value.axiom == "additive"

    def test_not_unital(self):
        with pytest.raises(MapValidationError) as info:
            make_map(zmod(6), zmod(6), [3])
        assert info.value.axiom == "unital"

    def test_not_multiplicative(self):
        """F_4 -> Z/2 has additive unital maps but no ring maps"""
        source, target = poly_quotient(zmod(2), [1, 1, 1]), zmod(2)
        axioms = set()
        for images in itertools.product(list(target.elements()), repeat=source.rank):
            with pytest.raises(MapValidationError) as info:
                make_map(source, target, list(images))
            axioms.add(info.value.axiom)
        assert "multiplicative" in axioms

    def test_diagonal_and_projection(self):
        ring = zmod(3)
        diag = diagonal_map(ring)
        assert diag.is_injective()
        first = projection_map(diag.target, 0)
        assert compose(first, diag) == identity_map(ring)

    def test_product_element(self):
        p = product([zmod(2), zmod(3)])
        e = product_element(p, [(1,), (0,)])
        assert p.is_idempotent(e)
        assert projection_map(p, 0)(e) == (1,)
        assert projection_map(p, 1)(e) == (0,)

    def test_inclusion(self):
        phi = inclusion_map(poly_quotient(zmod(3), [2, 0, 1]))
        assert phi.is_injective()
        assert not phi.is_surjective()

    def test_homomorphism_count(self):
        """Z/6 has only the identity; Z/2 x Z/2 -> Z/2 has two projections"""
        assert len(list(ring_homomorphisms(zmod(6), zmod(6)))) == 1
        assert len(list(ring_homomorphisms(product([zmod(2), zmod(2)]), zmod(2)))) == 2
        assert list(ring_homomorphisms(zmod(3), zmod(2))) == []

    def test_search_cap(self):
        limits = ComputeLimits(iso_search_max_assignments=0)
        with pytest.raises(CapExceededError):
            list(ring_homomorphisms(zmod(8), zmod(8), limits))

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(SMALL_RINGS), st.sampled_from(SMALL_RINGS))
    def test_found_maps_are_homomorphisms(self, source, target):
        """Every map the search returns is additive, unital and multiplicative"""
        for phi in itertools.islice(ring_homomorphisms(source, target), 8):
            assert phi(source.one) == target.one
            for x in source.elements():
                for y in source.elements():
                    assert phi(source.mul(x, y)) == target.mul(phi(x), phi(y))
                    assert phi(source.add(x, y)) == target.add(phi(x), phi(y))


class TestIdeals:
    """Test ideals and ideal arithmetic"""

    def test_closure(self):
        """(4) in Z/12 is {0, 4, 8}"""
        z12 = zmod(12)
        assert Ideal(z12, [(4,)]).closure == ((0,), (4,), (8,))

    def test_enumeration(self):
        """Ideals of Z/n correspond to divisors of n"""
        assert len(enumerate_ideals(zmod(12))) == 6
        assert len(enumerate_ideals(zmod(8))) == 4
        assert len(enumerate_ideals(product([zmod(2), zmod(2)]))) == 4

    def test_enumeration_cap(self):
        limits = ComputeLimits(ideal_enumeration_max_order=8)
        with pytest.raises(CapExceededError):
            enumerate_ideals(zmod(12), limits)

    def test_arithmetic(self):
        z12 = zmod(12)
        two, three = ideal_from(z12, [2]), ideal_from(z12, [3])
        assert ideal_sum(two, three).is_unit()
        assert ideal_intersect(two, three) == ideal_from(z12, [6])
        assert ideal_product(two, two) == ideal_from(z12, [4])

    @pytest.mark.parametrize("ring", SMALL_RINGS, ids=lambda r: r.name)
    def test_product_distributes_over_sum(self, ring):
        ideals = enumerate_ideals(ring)
        for i, j, k in itertools.product(ideals, repeat=3):
            assert ideal_product(i, ideal_sum(j, k)) == ideal_sum(ideal_product(i, j), ideal_product(i, k))

    def test_colon_and_annihilator(self):
        z12 = zmod(12)
        assert annihilator(z12, [4]) == ideal_from(z12, [3])
        assert colon_ideal(ideal_from(z12, [6]), ideal_from(z12, [2])) == ideal_from(z12, [3])

    def test_faithful(self):
        z6 = zmod(6)
        assert is_faithful(ideal_from(z6, [2, 3]))
        assert not is_faithful(ideal_from(z6, [2]))


class TestModules:
    """Test finite modules"""

    def test_regular_module(self):
        m = regular_module(zmod(6))
        assert m.order == 6
        assert m.act((2,), (5,)) == (4,)

    def test_quotient_module(self):
        z4 = zmod(4)
        m = quotient_module(z4, ideal_from(z4, [2]))
        assert m.order == 2
        assert m.act((3,), m.basis()[0]) == m.basis()[0]

    def test_restriction(self):
        phi = make_map(zmod(4), zmod(2), [1])
        m = restriction_module(phi)
        assert m.ring == zmod(4)
        assert m.order == 2

    def test_colon_on_non_flat_module(self):
        """(0 : 2) Z/2 differs from 0 : 2 over Z/4"""
        z4 = zmod(4)
        m = quotient_module(z4, ideal_from(z4, [2]))
        left, right = module_colon(m, Ideal(z4), ideal_from(z4, [2]))
        assert left != right
        assert left.order == 1
        assert right.order == 2

    def test_action_table_rebuilds_module(self):
        z4 = zmod(4)
        m = quotient_module(z4, ideal_from(z4, [2]))
        rebuilt = FiniteModule(z4, m.additive, m.action_table())
        assert rebuilt.order == m.order
        assert rebuilt.act((3,), rebuilt.basis()[0]) == m.act((3,), m.basis()[0])
