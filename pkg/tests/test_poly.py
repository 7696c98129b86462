"""
Tests for polynomials, McCoy annihilators and regular elements
"""

import pytest
from hypothesis import given, settings, strategies as st

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.core.errors import (
    EmptyInputError, ExtensionShapeViolatedError, MalformedElementError, NotFaithfulError,
    NotInKernelError, SpecFormatError, VariableMismatchError
)
from src.core.poly import (
    Poly, constant_term_contraction, eval_kernel_rewrite, faithfulness_witness,
    has_polynomial_annihilator, mccoy_annihilator, parse_poly, regular_element, shift_schedule
)
from src.core.rings import ideal_from, poly_quotient, product, zmod

Z2, Z4, Z6 = zmod(2), zmod(4), zmod(6)

RINGS = [Z2, Z4, Z6, zmod(8), zmod(12), product([zmod(2), zmod(2)]), poly_quotient(zmod(2), [0, 0, 1])]


@st.composite
def polys(draw, rings=RINGS, max_degree=4):
    ring = draw(st.sampled_from(rings))
    elements = list(ring.elements())
    coeffs = draw(st.lists(st.sampled_from(elements), min_size=0, max_size=max_degree + 1))
    return Poly.from_coefficients(ring, coeffs)


class TestPolyArithmetic:
    """Test Poly arithmetic and parsing"""

    def test_square_in_characteristic_two(self):
        """(x + 1)^2 = x^2 + 1 over Z/2"""
        f = parse_poly("x + 1", Z2)
        assert f ** 2 == parse_poly("x^2 + 1", Z2)

    def test_times_zero(self):
        f = parse_poly("3x^2 + x + 5", Z6)
        assert (f * Poly(Z6)).is_zero()

    def test_evaluate(self):
        """x^2 - 1 vanishes at 1 over Z/4"""
        assert parse_poly("x^2 - 1", Z4).evaluate([1]) == Z4.zero

    def test_degree_and_coefficients(self):
        f = parse_poly("2*x^3 + x", Z6)
        assert f.degree == 3
        assert f.coefficients() == [(0,), (1,), (0,), (2,)]
        assert Poly(Z6).degree is None

    def test_multivariate_parse(self):
        f = parse_poly("x1*x2 - 1", Z6)
        assert f.vars == ("x1", "x2")
        assert f.evaluate([1, 1]) == Z6.zero
        assert f.degree == 2

    def test_str(self):
        assert str(parse_poly("2x^2 + 3", Z6)) == "2*x^2 + 3"
        assert str(Poly(Z6)) == "0"

    def test_shift(self):
        x = Poly.variable(Z6)
        assert x.shift(2) == parse_poly("x^3", Z6)

    def test_variable_mismatch(self):
        with pytest.raises(VariableMismatchError):
            parse_poly("x", Z6) + parse_poly("y", Z6)

    @pytest.mark.parametrize("text", ["", "x +* 2", "x^", "x + 2*"])
    def test_bad_input(self, text):
        with pytest.raises(SpecFormatError):
            parse_poly(text, Z6)

    @settings(max_examples=50, deadline=None)
    @given(st.data())
    def test_ring_laws(self, data):
        ring = data.draw(st.sampled_from(RINGS))
        f, g, h = (data.draw(polys(rings=[ring])) for _ in range(3))
        assert f * (g + h) == f * g + f * h
        assert (f * g) * h == f * (g * h)
        assert f * g == g * f


class TestMcCoy:
    """Test McCoy annihilators"""

    def test_zero_divisor(self):
        """3 kills 2x + 4 over Z/6"""
        assert mccoy_annihilator(parse_poly("2x + 4", Z6)) == (3,)

    def test_monic_is_regular(self):
        assert mccoy_annihilator(parse_poly("x", Z6)) is None
        assert mccoy_annihilator(parse_poly("x^3 + 2x", Z4)) is None

    def test_zero_polynomial(self):
        """The zero polynomial counts as a zero-divisor, killed by 1"""
        assert mccoy_annihilator(Poly(Z6)) == Z6.one

    def test_zero_ring(self):
        assert mccoy_annihilator(Poly(zmod(1))) is None

    def test_multivariate_rejected(self):
        with pytest.raises(VariableMismatchError):
            mccoy_annihilator(parse_poly("x*y", Z6))

    @settings(max_examples=120, deadline=None)
    @given(polys())
    def test_matches_polynomial_annihilators(self, f):
        """A constant annihilator exists exactly when a polynomial one does"""
        witness = mccoy_annihilator(f)
        assert (witness is not None) == has_polynomial_annihilator(f, max_degree=4)
        if witness is not None:
            assert any(witness)
            assert f.scale(witness).is_zero()


class TestRegularElements:
    """Test the shift schedule and regular element construction"""

    def test_schedule(self):
        fs = [parse_poly("2x", Z6), parse_poly("3", Z6)]
        schedule = shift_schedule(fs)
        assert schedule.order == (1, 0)
        assert schedule.shifts == (0, 1)

    def test_regular_element(self):
        """3 and 2x give 3 + 2x^2 over Z/6"""
        g = regular_element([parse_poly("3", Z6), parse_poly("2x", Z6)])
        assert g == parse_poly("3 + 2x^2", Z6)
        assert mccoy_annihilator(g) is None

    def test_single_regular_input(self):
        x = parse_poly("x", Z6)
        assert regular_element([x]) == x

    def test_not_faithful(self):
        """3 kills both 2x and 4"""
        fs = [parse_poly("2x", Z6), parse_poly("4", Z6)]
        assert faithfulness_witness(fs) == (3,)
        with pytest.raises(NotFaithfulError) as info:
            regular_element(fs)
        assert info.value.witness == (3,)

    def test_empty_and_zero_inputs(self):
        with pytest.raises(EmptyInputError):
            regular_element([])
        with pytest.raises(MalformedElementError):
            regular_element([Poly(Z6)])

    def test_ties_keep_input_order(self):
        fs = [parse_poly("x + 3", Z6), parse_poly("2x", Z6)]
        assert shift_schedule(fs).order == (0, 1)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(polys(rings=[Z6]), min_size=1, max_size=4))
    def test_supports_disjoint(self, fs):
        fs = [f for f in fs if not f.is_zero()]
        if not fs:
            return
        schedule = shift_schedule(fs)
        pieces = [fs[i].shift(s) for i, s in zip(schedule.order, schedule.shifts)]
        for piece, next_shift in zip(pieces, schedule.shifts[1:]):
            assert piece.degree < next_shift
        if faithfulness_witness(fs) is None:
            g = regular_element(fs)
            assert mccoy_annihilator(g) is None
            assert all(any(Z6.mul(c, coeff) for coeff in g.content()) for c in Z6.elements() if any(c))


class TestEvaluationKernel:
    """Test f = sum h_i (x_i - c_i)"""

    def test_univariate(self):
        """x^2 - 1 = (x + 1)(x - 1) over Z/4"""
        assert eval_kernel_rewrite(parse_poly("x^2 - 1", Z4), [1]) == [parse_poly("x + 1", Z4)]

    def test_bivariate(self):
        """x1 x2 - 1 = 1 (x1 - 1) + x1 (x2 - 1)"""
        f = parse_poly("x1*x2 - 1", Z6)
        assert eval_kernel_rewrite(f, [1, 1]) == [
            Poly.constant(Z6, 1, f.vars), Poly.variable(Z6, "x1", f.vars)
        ]

    def test_zero(self):
        hs = eval_kernel_rewrite(Poly(Z6, ("x", "y")), [2, 3])
        assert all(h.is_zero() for h in hs)

    def test_not_in_kernel(self):
        with pytest.raises(NotInKernelError):
            eval_kernel_rewrite(parse_poly("x", Z6), [1])

    def test_point_size(self):
        with pytest.raises(VariableMismatchError):
            eval_kernel_rewrite(parse_poly("x", Z6), [0, 0])

    @settings(max_examples=60, deadline=None)
    @given(polys(), st.integers(0, 15))
    def test_expands_back(self, f, c):
        f = f - Poly.constant(f.ring, f.evaluate([c]), f.vars)
        (h,) = eval_kernel_rewrite(f, [c])
        assert h * (Poly.variable(f.ring) - Poly.constant(f.ring, c)) == f


class TestContraction:
    """Test the constant-term contraction of extended ideals"""

    def test_extended_ideal(self):
        """2 and 2x + 2 contract to (2) in Z/6"""
        ideal = constant_term_contraction([parse_poly("2", Z6), parse_poly("2x + 2", Z6)])
        assert ideal == ideal_from(Z6, [2])

    def test_zero(self):
        assert constant_term_contraction([Poly(Z6)]).is_zero()

    def test_not_extended(self):
        """<x> is not of the form I[x]"""
        with pytest.raises(ExtensionShapeViolatedError):
            constant_term_contraction([parse_poly("x", Z6)])
