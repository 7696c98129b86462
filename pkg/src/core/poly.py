"""
Polynomials over finite rings

Sparse multivariate polynomials, McCoy annihilators, the regular-element
construction for faithful generator lists, and the evaluation-kernel rewrite
f = sum h_i (x_i - c_i).
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .abelian import Element, present, subgroup_closure
from .errors import (
    EmptyInputError,
    ExtensionShapeViolatedError,
    MalformedElementError,
    NotFaithfulError,
    NotInKernelError,
    SpecFormatError,
    VariableMismatchError,
)
from .rings import FiniteRing, Ideal, RingValue, annihilator, ideal_from

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


class Poly:
    """Polynomial with coefficients in a FiniteRing; zero coefficients are never stored"""

    def __init__(self, ring: FiniteRing, variables: Sequence[str] = ("x",),
                 terms: Optional[Mapping[Exponent, RingValue]] = None):
        self.ring = ring
        self.vars: Tuple[str, ...] = tuple(variables)
        self.terms: Dict[Exponent, Element] = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != len(self.vars) or any(e < 0 for e in exponent):
                raise MalformedElementError(f"exponent {exponent} does not fit variables {self.vars}")
            c = ring.coerce(coeff)
            if any(c):
                self.terms[exponent] = c

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, ring: FiniteRing, value: RingValue, variables: Sequence[str] = ("x",)) -> "Poly":
        return cls(ring, variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, ring: FiniteRing, name: str = "x", variables: Optional[Sequence[str]] = None) -> "Poly":
        variables = tuple(variables or (name,))
        exponent = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise VariableMismatchError(f"{name} is not one of {variables}")
        return cls(ring, variables, {exponent: ring.one})

    @classmethod
    def from_coefficients(cls, ring: FiniteRing, coeffs: Sequence[RingValue], var: str = "x") -> "Poly":
        """Univariate polynomial, lowest degree first"""
        return cls(ring, (var,), {(i,): c for i, c in enumerate(coeffs)})

    def _like(self, terms: Mapping[Exponent, Element]) -> "Poly":
        return Poly(self.ring, self.vars, terms)

    def _check(self, other: "Poly") -> None:
        if self.ring != other.ring:
            raise VariableMismatchError(f"polynomials over {self.ring.name} and {other.ring.name}")
        if self.vars != other.vars:
            raise VariableMismatchError(f"polynomials in {self.vars} and {other.vars}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self.ring, other, self.vars)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = self.ring.add(terms.get(e, self.ring.zero), c)
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return self._like({e: self.ring.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        ring = self.ring
        terms: Dict[Exponent, Element] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = ring.add(terms.get(e, ring.zero), ring.mul(c1, c2))
        return self._like(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        result = Poly.constant(self.ring, self.ring.one, self.vars)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c: RingValue) -> "Poly":
        c = self.ring.coerce(c)
        return self._like({e: self.ring.mul(c, v) for e, v in self.terms.items()})

    def shift(self, s: int, var: int = 0) -> "Poly":
        """Multiply by x_var^s"""
        return self._like({
            tuple(a + s if i == var else a for i, a in enumerate(e)): c for e, c in self.terms.items()
        })

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.vars == other.vars and self.terms == other.terms
        if isinstance(other, int):
            return self == Poly.constant(self.ring, other, self.vars)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- inspection --------------------------------------------------------------

    @property
    def degree(self) -> Optional[int]:
        """Total degree; None for the zero polynomial"""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    @property
    def constant_term(self) -> Element:
        return self.terms.get((0,) * len(self.vars), self.ring.zero)

    def coefficients(self) -> List[Element]:
        """Dense coefficient list of a univariate polynomial, lowest degree first"""
        if len(self.vars) != 1:
            raise VariableMismatchError("coefficients() needs a univariate polynomial")
        if not self.terms:
            return []
        return [self.terms.get((i,), self.ring.zero) for i in range(self.degree + 1)]

    def content(self) -> List[Element]:
        """All nonzero coefficients in graded lexicographic term order"""
        return [self.terms[e] for e in self._ordered()]

    def _ordered(self) -> List[Exponent]:
        return sorted(self.terms, key=lambda e: (sum(e), e), reverse=True)

    def evaluate(self, point: Sequence[RingValue]) -> Element:
        if len(point) != len(self.vars):
            raise VariableMismatchError(f"point {tuple(point)} has {len(point)} coordinates, need {len(self.vars)}")
        ring = self.ring
        values = [ring.coerce(v) for v in point]
        total = ring.zero
        for e, c in self.terms.items():
            term = c
            for v, a in zip(values, e):
                if a:
                    term = ring.mul(term, ring.power(v, a))
            total = ring.add(total, term)
        return total

    __call__ = evaluate

    def substitute(self, var: int, value: RingValue) -> "Poly":
        """Replace x_var by a constant, keeping the variable list"""
        ring = self.ring
        v = ring.coerce(value)
        terms: Dict[Exponent, Element] = {}
        for e, c in self.terms.items():
            reduced = tuple(0 if i == var else a for i, a in enumerate(e))
            terms[reduced] = ring.add(terms.get(reduced, ring.zero), ring.mul(c, ring.power(v, e[var])))
        return self._like(terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in self._ordered():
            c = self.terms[e]
            mono = "*".join(
                v if a == 1 else f"{v}^{a}" for v, a in zip(self.vars, e) if a
            )
            label = format_coefficient(self.ring, c)
            if not mono:
                parts.append(label)
            elif c == self.ring.one:
                parts.append(mono)
            else:
                parts.append(f"{label}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self}, over {self.ring.name})"


def format_coefficient(ring: FiniteRing, c: Element) -> str:
    """n when c = n * 1, otherwise the coordinate tuple"""
    multiple = ring.zero
    for n in range(ring.characteristic):
        if multiple == c:
            return str(n)
        multiple = ring.add(multiple, ring.one)
    return str(tuple(c))


_TERM = re.compile(r"([+-]?)([^+-]+)")
_FACTOR = re.compile(r"^(\d*)([A-Za-z][A-Za-z0-9_]*)(?:\^(\d+))?$")
_VARIABLE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def _variable_key(name: str):
    match = re.match(r"^([A-Za-z_]+)(\d*)$", name)
    if match:
        return match.group(1), int(match.group(2) or 0)
    return name, 0


def parse_poly(text: str, ring: FiniteRing, variables: Optional[Sequence[str]] = None) -> Poly:
    """Parse e.g. "2*x^2 + 3" or "x1*x2 - 1"; integers mean multiples of 1"""
    source = text.replace(" ", "")
    if not source:
        raise SpecFormatError("empty polynomial")
    if variables is None:
        found = sorted(set(_VARIABLE.findall(source)), key=_variable_key)
        variables = tuple(found) or ("x",)
    variables = tuple(variables)
    result = Poly(ring, variables)
    position = 0
    for match in _TERM.finditer(source):
        if match.start() != position:
            raise SpecFormatError(f"cannot parse {text!r} near position {position}")
        position = match.end()
        sign, body = match.groups()
        coeff = 1
        exponent = [0] * len(variables)
        for factor in body.split("*"):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            parsed = _FACTOR.match(factor)
            if not parsed:
                raise SpecFormatError(f"cannot parse factor {factor!r} in {text!r}")
            prefix, name, power = parsed.groups()
            if name not in variables:
                raise VariableMismatchError(f"unknown variable {name!r}; expected one of {variables}")
            if prefix:
                coeff *= int(prefix)
            exponent[variables.index(name)] += int(power) if power else 1
        if sign == "-":
            coeff = -coeff
        result = result + Poly(ring, variables, {tuple(exponent): coeff})
    if position != len(source):
        raise SpecFormatError(f"trailing input in {text!r}")
    return result


# ---------------------------------------------------------------------------
# McCoy
# ---------------------------------------------------------------------------

def _require_univariate(f: Poly) -> None:
    if len(f.vars) != 1:
        raise VariableMismatchError(f"expected a univariate polynomial, got variables {f.vars}")


def mccoy_annihilator(f: Poly) -> Optional[Element]:
    """Smallest nonzero c with c·f = 0, or None when f is regular in R[x].

    The zero polynomial is annihilated by 1 and counts as a zero-divisor,
    except over the zero ring, where nothing is nonzero.
    """
    _require_univariate(f)
    ring = f.ring
    if ring.is_zero_ring():
        return None
    if f.is_zero():
        return ring.one
    ann = annihilator(ring, f.content())
    if ann.is_zero():
        return None
    return next(x for x in ann.closure if any(x))


def has_polynomial_annihilator(f: Poly, max_degree: int = 4) -> bool:
    """Whether some nonzero g with deg g <= max_degree has g·f = 0.

    Decided exactly: g -> g·f is additive on R^(max_degree + 1), and a nonzero
    kernel exists iff its image is smaller than the domain.
    """
    _require_univariate(f)
    ring = f.ring
    if ring.is_zero_ring():
        return False
    if f.is_zero():
        return True
    width = max_degree + 1
    length = width + f.degree
    q = present(ring.invariant_factors * length, [])
    images = []
    for a in range(width):
        for e in ring.basis():
            coeffs = (Poly(ring, f.vars, {(a,): e}) * f).terms
            raw: List[int] = []
            for i in range(length):
                raw.extend(coeffs.get((i,), ring.zero))
            images.append(q.project(raw))
    return subgroup_closure(q.group, images).order < ring.order ** width


# ---------------------------------------------------------------------------
# Regular elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShiftSchedule:
    """Generators sorted by degree and the power of x each one is shifted by"""
    order: Tuple[int, ...]      # input indices, by degree, ties in input order
    shifts: Tuple[int, ...]     # s_i = d_1 + ... + d_(i-1) + (i - 1)


def shift_schedule(fs: Sequence[Poly]) -> ShiftSchedule:
    if not fs:
        raise EmptyInputError("no generators")
    for f in fs:
        if f.is_zero():
            raise MalformedElementError("the zero polynomial has no degree")
    order = tuple(sorted(range(len(fs)), key=lambda i: fs[i].degree))
    shifts = []
    total = 0
    for i in order:
        shifts.append(total)
        total += fs[i].degree + 1
    return ShiftSchedule(order, tuple(shifts))


def _common_ring(fs: Sequence[Poly]) -> FiniteRing:
    first = fs[0]
    _require_univariate(first)
    for f in fs[1:]:
        first._check(f)
    return first.ring


def faithfulness_witness(fs: Sequence[Poly]) -> Optional[Element]:
    """A nonzero constant killing every coefficient of every f, or None"""
    ring = _common_ring(fs)
    coefficients = [c for f in fs for c in f.content()]
    ann = annihilator(ring, coefficients)
    if ann.is_zero():
        return None
    return next(x for x in ann.closure if any(x))


def regular_element(fs: Sequence[Poly]) -> Poly:
    """g = sum x^(s_i) f_i over the degree-sorted f_i; regular when <fs> is faithful"""
    if not fs:
        raise EmptyInputError("regular_element needs at least one polynomial")
    schedule = shift_schedule(fs)
    ring = _common_ring(fs)
    witness = faithfulness_witness(fs)
    if witness is not None:
        raise NotFaithfulError(f"{witness} annihilates every generator", witness=witness)

    g = Poly(ring, fs[0].vars)
    pieces = [fs[i].shift(s) for i, s in zip(schedule.order, schedule.shifts)]
    for piece, next_shift in zip(pieces, schedule.shifts[1:]):
        if piece.degree >= next_shift:
            raise AssertionError("shifted generators overlap")
    for piece in pieces:
        g = g + piece
    if mccoy_annihilator(g) is not None:
        raise AssertionError(f"constructed element {g} is a zero-divisor")
    logger.debug(f"Regular element {g} from {len(fs)} generators")
    return g


# ---------------------------------------------------------------------------
# Evaluation kernels and contractions
# ---------------------------------------------------------------------------

def _geometric(ring: FiniteRing, variables: Tuple[str, ...], var: int, j: int, c: Element) -> Poly:
    """x^(j-1) + x^(j-2) c + ... + c^(j-1) in x = x_var"""
    terms = {}
    for i in range(j):
        exponent = tuple(j - 1 - i if k == var else 0 for k in range(len(variables)))
        terms[exponent] = ring.power(c, i)
    return Poly(ring, variables, terms)


def eval_kernel_rewrite(f: Poly, point: Sequence[RingValue]) -> List[Poly]:
    """h_1, ..., h_n with f = sum h_i (x_i - c_i), for f vanishing at c"""
    ring = f.ring
    n = len(f.vars)
    if len(point) != n:
        raise VariableMismatchError(f"point {tuple(point)} has {len(point)} coordinates, need {n}")
    c = [ring.coerce(v) for v in point]
    value = f.evaluate(c)
    if any(value):
        raise NotInKernelError(f"f({tuple(c)}) = {value} is not zero", witness=value)

    hs: List[Poly] = [Poly(ring, f.vars) for _ in range(n)]
    remainder = f
    for var in reversed(range(n)):
        h = Poly(ring, f.vars)
        for e, coeff in remainder.terms.items():
            j = e[var]
            if j:
                lower = tuple(0 if k == var else a for k, a in enumerate(e))
                h = h + Poly(ring, f.vars, {lower: coeff}) * _geometric(ring, f.vars, var, j, c[var])
        hs[var] = h
        remainder = remainder.substitute(var, c[var])

    total = Poly(ring, f.vars)
    for i, h in enumerate(hs):
        total = total + h * (Poly.variable(ring, f.vars[i], f.vars) - Poly.constant(ring, c[i], f.vars))
    if total != f:
        raise AssertionError(f"rewrite of {f} does not expand back")
    return hs


def constant_term_contraction(fs: Iterable[Poly]) -> Ideal:
    """The ideal of R generated by the constant terms, after checking every
    coefficient lies in it"""
    fs = list(fs)
    if not fs:
        raise EmptyInputError("no polynomials")
    ring = fs[0].ring
    for f in fs[1:]:
        fs[0]._check(f)
    ideal = ideal_from(ring, [f.constant_term for f in fs])
    for f in fs:
        for coeff in f.content():
            if not ideal.contains(coeff):
                raise ExtensionShapeViolatedError(
                    f"coefficient {coeff} of {f} is not in the ideal of constant terms", witness=coeff
                )
    return ideal
