"""
Fractions with regular denominators in R[x]

Elements of the total quotient ring T(R[x]). There is no reduced form (R[x] is
not a UFD), so equality is cross-multiplication: a/b == c/d iff a*d == c*b,
which is transitive because denominators are regular.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from .errors import NotInvertibleError, SpecFormatError
from .poly import Poly, mccoy_annihilator, parse_poly, regular_element, shift_schedule
from .rings import FiniteRing, annihilator

logger = logging.getLogger(__name__)

Operand = Union["Frac", Poly, int]


class Frac:
    """num / den with den a non-zero-divisor of R[x]"""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None):
        if den is None:
            den = Poly.constant(num.ring, num.ring.one, num.vars)
        num._check(den)
        witness = mccoy_annihilator(den)
        if witness is not None:
            raise NotInvertibleError(f"denominator {den} is killed by {witness}", witness=witness)
        self.num = num
        self.den = den

    @property
    def ring(self) -> FiniteRing:
        return self.num.ring

    def _coerce(self, other: Operand) -> "Frac":
        if isinstance(other, Frac):
            self.num._check(other.num)
            return other
        if isinstance(other, Poly):
            return Frac(other)
        if isinstance(other, int):
            return Frac(Poly.constant(self.ring, other, self.num.vars))
        return NotImplemented

    def __add__(self, other: Operand) -> "Frac":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den)

    def __sub__(self, other: Operand) -> "Frac":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Operand) -> "Frac":
        return self._coerce(other) - self

    def __mul__(self, other: Operand) -> "Frac":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Frac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def invert(self) -> "Frac":
        witness = mccoy_annihilator(self.num)
        if witness is not None:
            raise NotInvertibleError(f"numerator {self.num} is a zero-divisor (killed by {witness})",
                                     witness=witness)
        return Frac(self.den, self.num)

    def __truediv__(self, other: Operand) -> "Frac":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.invert()

    def __rtruediv__(self, other: Operand) -> "Frac":
        return self._coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (Poly, int)):
            other = self._coerce(other)
        if not isinstance(other, Frac):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"Frac({self}, over {self.ring.name})"


def embed(f: Poly) -> Frac:
    """f -> f/1"""
    return Frac(f)


def parse_frac(text: str, ring: FiniteRing, var: str = "x") -> Frac:
    """"num / den" or a bare polynomial"""
    parts = text.split("/")
    if len(parts) > 2:
        raise SpecFormatError(f"more than one '/' in {text!r}")
    num = parse_poly(parts[0].strip().strip("()"), ring, (var,))
    if len(parts) == 1:
        return Frac(num)
    return Frac(num, parse_poly(parts[1].strip().strip("()"), ring, (var,)))


@dataclass(frozen=True)
class DenominatorCertificate:
    """A regular element of the ideal <fs>, with the combination producing it"""
    element: Poly
    generators: Tuple[Poly, ...]
    combination: Tuple[Tuple[int, int], ...]       # (generator index, power of x)

    def verify(self) -> bool:
        total = Poly(self.element.ring, self.element.vars)
        for index, shift in self.combination:
            total = total + self.generators[index].shift(shift)
        return total == self.element and mccoy_annihilator(self.element) is None

    def as_fraction(self) -> Frac:
        return Frac(self.element)

    def reciprocal(self) -> Frac:
        one = Poly.constant(self.element.ring, self.element.ring.one, self.element.vars)
        return Frac(one, self.element)


def construct_denominator(fs: Sequence[Poly]) -> DenominatorCertificate:
    """Regular element of a faithful ideal, usable as a denominator"""
    g = regular_element(fs)
    schedule = shift_schedule(fs)
    certificate = DenominatorCertificate(g, tuple(fs), tuple(zip(schedule.order, schedule.shifts)))
    if not certificate.verify():
        raise AssertionError(f"certificate for {g} does not verify")
    return certificate


def total_quotient_is_trivial(ring: FiniteRing) -> bool:
    """T(R) = R: every element with zero annihilator has an inverse"""
    for x in ring.elements():
        if annihilator(ring, [x]).is_zero():
            try:
                ring.inverse(x)
            except NotInvertibleError:
                logger.warning(f"Regular element {x} of {ring.name} is not a unit")
                return False
    return True
