"""
Tests for Gabriel filters and the classification of flat epimorphisms
"""

import pytest

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.core.errors import MapValidationError, PreconditionError
from src.core.gabriel import (
    Classification, GabrielFilter, classify_flat_epis, compatible_isomorphism, extension,
    filter_of, filters_equal, verify_axioms
)
from src.core.rings import (
    Ideal, compose, enumerate_ideals, ideal_from, identity_map, inclusion_map, make_map,
    poly_quotient, quotient, quotient_map, zmod
)
from src.harness.generators import flat_epimorphisms_from

Z4, Z6 = zmod(4), zmod(6)


def to_z3():
    """Z/6 -> Z/6/(3), the factor where 2 is invertible"""
    return quotient_map(quotient(Z6, [3]))


def to_z2():
    """Z/6 -> Z/6/(2)"""
    return quotient_map(quotient(Z6, [2]))


def to_z3_copy():
    """to_z3 followed by Z/3 -> Z/3[t]/(t - 1)"""
    pi = to_z3()
    f = pi.target
    return compose(inclusion_map(poly_quotient(f, [f.neg(f.one), f.one])), pi)


class TestFilters:
    """Test filter_of"""

    def test_identity(self):
        """Only the unit ideal extends to the whole ring"""
        filt = filter_of(identity_map(Z6))
        assert len(filt) == 1
        assert ideal_from(Z6, [1]) in filt

    def test_factor(self):
        """(2) and (1) extend to the unit ideal of Z/3"""
        filt = filter_of(to_z3())
        assert len(filt) == 2
        assert ideal_from(Z6, [2]) in filt
        assert ideal_from(Z6, [3]) not in filt
        assert filt.generator_sets() == [[[2]], [[1]]]

    def test_surjection_with_nilpotent_kernel(self):
        filt = filter_of(make_map(Z4, zmod(2), [1]))
        assert len(filt) == 1

    def test_extension(self):
        assert extension(to_z3(), ideal_from(Z6, [2])).is_unit()
        assert extension(to_z3(), ideal_from(Z6, [3])).is_zero()

    def test_equality(self):
        assert filters_equal(filter_of(to_z3()), filter_of(to_z3_copy()))
        assert not filters_equal(filter_of(to_z3()), filter_of(to_z2()))


class TestAxioms:
    """Test the Gabriel filter axioms"""

    @pytest.mark.parametrize("phi", [identity_map(Z6), to_z3(), to_z2(), make_map(Z4, zmod(2), [1])], ids=repr)
    def test_filters_of_maps_pass(self, phi):
        assert verify_axioms(filter_of(phi)).passed

    def test_principal_filter(self):
        filt = GabrielFilter(Z4, (ideal_from(Z4, [1]),))
        assert verify_axioms(filt).passed

    def test_not_closed_under_products(self):
        """(2)(2) = 0 is missing from {(1), (2)} on Z/4"""
        filt = GabrielFilter(Z4, (ideal_from(Z4, [1]), ideal_from(Z4, [2])))
        report = verify_axioms(filt)
        assert report.t1 and report.t2
        assert not report.t3
        assert not report.passed
        assert report.failures

    def test_missing_unit_ideal(self):
        report = verify_axioms(GabrielFilter(Z6, ()))
        assert not report.t1

    def test_not_upward_closed(self):
        report = verify_axioms(GabrielFilter(Z6, (Ideal(Z6),)))
        assert not report.t2

    @pytest.mark.parametrize("ring", [zmod(6), zmod(12), zmod(10)], ids=str)
    def test_monotone_by_extension(self, ring):
        """Ideals above a member extend to the unit ideal as well"""
        for phi in flat_epimorphisms_from(ring):
            filt = filter_of(phi)
            for member in filt.members:
                for ideal in enumerate_ideals(ring):
                    if member.issubset(ideal):
                        assert extension(phi, ideal).is_unit()


class TestClassification:
    """Test classify_flat_epis"""

    def test_same_map(self):
        result = classify_flat_epis(to_z3(), to_z3())
        assert result.verdict is Classification.SAME_CLASS
        assert result.theta is not None

    def test_different_factors(self):
        result = classify_flat_epis(to_z2(), to_z3())
        assert result.verdict is Classification.DIFFERENT
        assert not result.filters_equal
        assert result.theta is None

    def test_copy_through_isomorphism(self):
        phi, psi = to_z3(), to_z3_copy()
        result = classify_flat_epis(phi, psi)
        assert result.verdict is Classification.SAME_CLASS
        assert compose(result.theta, phi) == psi
        assert compatible_isomorphism(phi, psi) is not None

    def test_not_flat(self):
        """Z/4 -> Z/2 is an epimorphism but not flat"""
        phi = make_map(Z4, zmod(2), [1])
        with pytest.raises(PreconditionError) as info:
            classify_flat_epis(phi, phi)
        assert not isinstance(info.value, MapValidationError)
        assert "flat epimorphism" in str(info.value)

    def test_different_sources(self):
        with pytest.raises(PreconditionError):
            classify_flat_epis(identity_map(Z6), identity_map(Z4))
