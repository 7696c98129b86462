"""
Finite commutative rings, ring homomorphisms, ideals and finite modules

A ring is its additive FpGroup plus structure constants: _table[i, j] holds the
coordinates of e_i * e_j. Multiplication is the bilinear extension, evaluated
with numpy int64 contractions (coordinates are small, so nothing overflows).
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .abelian import (
    Element,
    FpGroup,
    Quotient,
    Subgroup,
    combine,
    kernel_generators,
    present,
    solve_combination,
    subgroup_closure,
    subgroup_intersection,
)
from .errors import (
    CapExceededError,
    EmptyInputError,
    MalformedElementError,
    MapValidationError,
    NotInvertibleError,
    RingAxiomError,
    RingConstructionError,
    SpecFormatError,
)
from .limits import DEFAULT_LIMITS, ComputeLimits

logger = logging.getLogger(__name__)

RingValue = Union[int, Sequence[int]]


@dataclass(frozen=True, eq=False)
class Construction:
    """How a ring was built, kept so the canonical maps can be recovered"""
    kind: str                                   # zmod | product | poly_quotient | quotient | presentation
    parts: Tuple["FiniteRing", ...] = ()
    presentation: Optional[Quotient] = None     # raw coordinates -> ring coordinates
    extra: Dict[str, Any] = field(default_factory=dict)


class FiniteRing:
    """Finite commutative ring with identity given by structure constants"""

    def __init__(self, additive: FpGroup, mult, one: Sequence[int], *,
                 name: Optional[str] = None,
                 description: Optional[Dict[str, Any]] = None,
                 construction: Optional[Construction] = None,
                 check: bool = True):
        self.additive = additive
        k = additive.rank
        try:
            table = np.asarray(mult, dtype=np.int64).reshape(k, k, k)
        except ValueError as e:
            raise RingAxiomError("structure", f"expected {k}x{k} products of {k} coordinates") from e
        if k:
            table = table % np.array(additive.invariant_factors, dtype=np.int64)
        self._table = table
        self._factors = np.array(additive.invariant_factors, dtype=np.int64)
        self.one = additive.element(one)
        self.name = name or f"FiniteRing({additive})"
        self.description = description
        self.construction = construction or Construction("presentation")
        if check:
            self._check_axioms()

    # -- structure -----------------------------------------------------------

    def _check_axioms(self) -> None:
        k = self.rank
        if not k:
            return
        d = self._factors
        for i in range(k):
            if np.any((d[i] * self._table[i]) % d):
                raise RingAxiomError("well-definedness", f"{d[i]} * e_{i} * e_j is not zero")
        if not np.array_equal(self._table, self._table.transpose(1, 0, 2)):
            i, j = next((i, j) for i in range(k) for j in range(k)
                        if not np.array_equal(self._table[i, j], self._table[j, i]))
            raise RingAxiomError("commutativity", f"e_{i} * e_{j} != e_{j} * e_{i}")
        for i, e in enumerate(self.basis()):
            if self.mul(self.one, e) != e:
                raise RingAxiomError("identity", f"one * e_{i} != e_{i}")
        left = np.einsum("ijm,mln->ijln", self._table, self._table) % d
        right = np.einsum("jlm,imn->ijln", self._table, self._table) % d
        if not np.array_equal(left, right):
            i, j, l = np.argwhere(np.any(left != right, axis=-1))[0]
            raise RingAxiomError("associativity", f"(e_{i} e_{j}) e_{l} != e_{i} (e_{j} e_{l})")

    @property
    def rank(self) -> int:
        return self.additive.rank

    @property
    def order(self) -> int:
        return self.additive.order

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return self.additive.invariant_factors

    @property
    def zero(self) -> Element:
        return self.additive.zero

    @property
    def characteristic(self) -> int:
        return self.additive.order_of(self.one) if self.rank else 1

    def is_zero_ring(self) -> bool:
        return self.rank == 0

    def basis(self) -> List[Element]:
        return self.additive.basis()

    def element(self, coords: Sequence[int]) -> Element:
        return self.additive.element(coords)

    def coerce(self, value: RingValue) -> Element:
        """An int n means n * 1; a sequence is a coordinate vector"""
        if isinstance(value, (int, np.integer)):
            return self.from_int(int(value))
        return self.additive.element(list(value))

    def from_int(self, n: int) -> Element:
        return self.additive.scale(self.one, n)

    def elements(self) -> Iterator[Element]:
        return self.additive.elements()

    def from_raw(self, raw: Sequence[int]) -> Element:
        if self.construction.presentation is None:
            return self.element(raw)
        return self.construction.presentation.project(raw)

    def to_raw(self, x: Sequence[int]) -> Element:
        if self.construction.presentation is None:
            return self.element(x)
        return self.construction.presentation.lift(x)

    # -- arithmetic ------------------------------------------------------------

    def add(self, x: Element, y: Element) -> Element:
        return self.additive.add(x, y)

    def neg(self, x: Element) -> Element:
        return self.additive.neg(x)

    def sub(self, x: Element, y: Element) -> Element:
        return self.additive.sub(x, y)

    def scale(self, x: Element, n: int) -> Element:
        return self.additive.scale(x, n)

    def mul(self, x: Sequence[int], y: Sequence[int]) -> Element:
        k = self.rank
        if not k:
            return ()
        xv = np.asarray(x, dtype=np.int64)
        yv = np.asarray(y, dtype=np.int64)
        v = yv @ (xv @ self._table.reshape(k, k * k)).reshape(k, k)
        return tuple(int(c) for c in v % self._factors)

    def power(self, x: Element, n: int) -> Element:
        if n < 0:
            raise ValueError("negative exponent")
        result, base = self.one, x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def multiples(self, x: Element) -> Subgroup:
        """The principal ideal x*R as an additive subgroup"""
        return subgroup_closure(self.additive, [self.mul(x, e) for e in self.basis()])

    def is_regular(self, x: Sequence[int]) -> bool:
        """Multiplication by x is injective, equivalently bijective on a finite ring"""
        return self.multiples(self.element(x)).order == self.order

    is_unit = is_regular

    def inverse(self, x: Sequence[int]) -> Element:
        x = self.element(x)
        coeffs = solve_combination(self.additive, [self.mul(x, e) for e in self.basis()], self.one)
        if coeffs is None:
            raise NotInvertibleError(f"{x} is not a unit of {self.name}", witness=x)
        return self.additive.reduce(coeffs)

    def is_idempotent(self, x: Element) -> bool:
        return self.mul(x, x) == tuple(x)

    def is_nilpotent(self, x: Element) -> bool:
        return self.power(x, max(1, self.order.bit_length())) == self.zero

    def units(self) -> List[Element]:
        return [x for x in self.elements() if self.is_unit(x)]

    def is_field(self) -> bool:
        return self.order > 1 and all(self.is_unit(x) for x in self.elements() if any(x))

    def is_local(self) -> bool:
        """Non-units form an ideal"""
        non_units = [x for x in self.elements() if not self.is_unit(x)]
        return self.order > 1 and Ideal(self, non_units).order == len(non_units)

    # -- identity ----------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FiniteRing):
            return NotImplemented
        return (self.additive == other.additive and self.one == other.one
                and np.array_equal(self._table, other._table))

    def __hash__(self):
        return hash((self.additive, self.one, self._table.tobytes()))

    def __repr__(self):
        return f"FiniteRing({self.name}, order={self.order})"

    def __str__(self):
        return self.name


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def ring_from_presentation(orders: Sequence[int], relations: Sequence[Sequence[int]],
                           raw_table, raw_one: Sequence[int], *,
                           name: Optional[str] = None,
                           description: Optional[Dict[str, Any]] = None,
                           kind: str = "presentation",
                           parts: Tuple[FiniteRing, ...] = (),
                           extra: Optional[Dict[str, Any]] = None,
                           check: bool = True,
                           presentation: Optional[Quotient] = None) -> FiniteRing:
    """Ring structure on (Z/n_1 + ... + Z/n_r) / <relations>.

    raw_table[i, j] gives the raw coordinates of u_i * u_j for the raw
    generators u_i; the relations must span an ideal. Products are taken on
    lifts and checked against a second lift that differs by a relation.
    """
    quotient = presentation if presentation is not None else present(orders, relations)
    n = len(quotient.ambient_orders)
    raw_orders = np.array([max(o, 1) for o in quotient.ambient_orders], dtype=np.int64)
    table = np.asarray(raw_table, dtype=np.int64).reshape(n, n, n)
    flat = table.reshape(n, n * n)
    rels = [np.array(r, dtype=np.int64) for r in relations]

    def raw_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (y @ (x @ flat).reshape(n, n)) % raw_orders

    group = quotient.group
    k = group.rank
    lifts = [np.array(quotient.lift(b), dtype=np.int64) for b in group.basis()]
    mult = np.zeros((k, k, k), dtype=np.int64)
    for a in range(k):
        for b in range(a, k):
            product = quotient.project(raw_mul(lifts[a], lifts[b]).tolist())
            if rels:
                shift = rels[(a * k + b) % len(rels)]
            else:
                shift = np.zeros(n, dtype=np.int64)
                shift[(a + b) % n] = raw_orders[(a + b) % n]
            other = quotient.project(raw_mul(lifts[a] + shift, lifts[b]).tolist())
            if product != other:
                raise RingConstructionError(
                    f"multiplication is not well defined on the quotient: e_{a} * e_{b} depends on the lift"
                )
            mult[a, b] = product
            mult[b, a] = product
    one = quotient.project(list(raw_one)) if n else ()
    construction = Construction(kind, tuple(parts), quotient, dict(extra or {}))
    return FiniteRing(group, mult, one, name=name, description=description,
                      construction=construction, check=check)


def zmod(n: int) -> FiniteRing:
    """Z/n; zmod(1) is the zero ring"""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise RingConstructionError(f"zmod needs a positive integer, got {n!r}")
    n = int(n)
    description = {"type": "zmod", "n": n}
    if n == 1:
        return FiniteRing(FpGroup(()), [], (), name="Z/1", description=description,
                          construction=Construction("zmod"))
    return FiniteRing(FpGroup((n,)), [[[1]]], (1,), name=f"Z/{n}", description=description,
                      construction=Construction("zmod"))


def _offsets(rings: Sequence[FiniteRing]) -> List[int]:
    offsets = [0]
    for ring in rings:
        offsets.append(offsets[-1] + ring.rank)
    return offsets


def product(factors: Sequence[FiniteRing]) -> FiniteRing:
    """Direct product; raw coordinates are the concatenated factor coordinates"""
    factors = tuple(factors)
    if not factors:
        raise EmptyInputError("product of no rings")
    offsets = _offsets(factors)
    n = offsets[-1]
    orders = [d for ring in factors for d in ring.invariant_factors]
    table = np.zeros((n, n, n), dtype=np.int64)
    raw_one: List[int] = []
    for ring, o in zip(factors, offsets):
        k = ring.rank
        table[o:o + k, o:o + k, o:o + k] = ring._table
        raw_one.extend(ring.one)
    descriptions = [ring.description for ring in factors]
    description = None
    if all(d is not None for d in descriptions):
        description = {"type": "product", "factors": descriptions}
    name = " x ".join(f"({r.name})" if " " in r.name else r.name for r in factors)
    return ring_from_presentation(orders, [], table, raw_one, name=name, description=description,
                                  kind="product", parts=factors)


def _format_poly(coeffs: Sequence[Element], var: str, ring: FiniteRing) -> str:
    terms = []
    for power, c in reversed(list(enumerate(coeffs))):
        if not any(c):
            continue
        label = str(c[0]) if len(c) == 1 else str(tuple(c))
        if power == 0:
            terms.append(label)
        else:
            mono = var if power == 1 else f"{var}^{power}"
            terms.append(mono if c == ring.one else f"{label}*{mono}")
    return " + ".join(terms) or "0"


def poly_quotient(base: FiniteRing, modulus: Sequence[RingValue], var: str = "t") -> FiniteRing:
    """base[var] / (modulus); modulus coefficients are given lowest degree first.

    The leading coefficient must be a unit, so the quotient is free over base
    with basis 1, t, ..., t^(m-1).
    """
    coeffs = [base.coerce(c) for c in modulus]
    if not coeffs:
        raise RingConstructionError("poly_quotient needs a modulus with at least one coefficient")
    m = len(coeffs) - 1
    lead = coeffs[-1]
    if not base.is_unit(lead):
        raise RingConstructionError(
            f"leading coefficient {lead} of the modulus is not a unit of {base.name}; "
            f"the quotient has no finite free basis"
        )
    name = f"{base.name}[{var}]/({_format_poly(coeffs, var, base)})"
    description = None
    if base.description is not None:
        description = {"type": "poly_quotient", "base": base.description, "var": var,
                       "modulus": [list(c) for c in coeffs]}

    kb = base.rank
    u_inv = base.inverse(lead)
    tail = [base.neg(base.mul(u_inv, c)) for c in coeffs[:m]]   # t^m = sum tail[i] t^i
    reps: List[List[Element]] = []
    for s in range(max(2 * m - 1, 2) if m else 0):
        if s < m:
            rep = [base.one if i == s else base.zero for i in range(m)]
        else:
            prev = reps[s - 1]
            top = prev[m - 1]
            rep = [base.zero] + prev[:m - 1]
            rep = [base.add(r, base.mul(top, c)) for r, c in zip(rep, tail)]
        reps.append(rep)

    n = m * kb
    table = np.zeros((n, n, n), dtype=np.int64)
    for a in range(m):
        for c in range(m):
            rep = reps[a + c]
            for b, eb in enumerate(base.basis()):
                for d, ed in enumerate(base.basis()):
                    p = base.mul(eb, ed)
                    for i in range(m):
                        table[a * kb + b, c * kb + d, i * kb:(i + 1) * kb] = base.mul(rep[i], p)
    orders = list(base.invariant_factors) * m
    raw_one = list(base.one) + [0] * (n - kb) if m else []
    raw_var = [v for coeff in reps[1] for v in coeff] if m else []
    ring = ring_from_presentation(orders, [], table, raw_one, name=name, description=description,
                                  kind="poly_quotient", parts=(base,),
                                  extra={"var": var, "degree": m, "modulus": coeffs})
    ring.construction.extra["generator"] = ring.from_raw(raw_var) if m else ()
    logger.debug(f"Built {name} of order {ring.order}")
    return ring


def quotient(base: FiniteRing, gens: Sequence[RingValue]) -> FiniteRing:
    """base / (gens)"""
    ideal = ideal_from(base, [base.coerce(g) for g in gens])
    label = ", ".join(str(g[0]) if len(g) == 1 else str(tuple(g)) for g in ideal.gens) or "0"
    description = None
    if base.description is not None:
        description = {"type": "quotient", "base": base.description, "ideal": [list(g) for g in ideal.gens]}
    return ring_from_presentation(base.invariant_factors, list(ideal.subgroup.gens), base._table, base.one,
                                  name=f"{base.name}/({label})", description=description,
                                  kind="quotient", parts=(base,))


def make_ring(spec: Mapping[str, Any]) -> FiniteRing:
    """Build a ring from a JSON-style description"""
    if not isinstance(spec, Mapping) or "type" not in spec:
        raise SpecFormatError(f"ring description must be an object with a 'type' key, got {spec!r}")
    kind = spec["type"]
    try:
        if kind == "zmod":
            return zmod(spec["n"])
        if kind == "product":
            return product([make_ring(f) for f in spec["factors"]])
        if kind == "poly_quotient":
            base = make_ring(spec["base"])
            return poly_quotient(base, spec["modulus"], spec.get("var", "t"))
        if kind == "quotient":
            base = make_ring(spec["base"])
            return quotient(base, spec.get("ideal", []))
    except KeyError as e:
        raise SpecFormatError(f"ring description of type {kind!r} is missing {e}") from e
    except TypeError as e:
        raise SpecFormatError(f"malformed {kind!r} ring description: {e}") from e
    raise SpecFormatError(f"unknown ring type {kind!r}")


# ---------------------------------------------------------------------------
# Ring maps
# ---------------------------------------------------------------------------

class RingMap:
    """Homomorphism given by the images of the source's additive basis"""

    def __init__(self, source: FiniteRing, target: FiniteRing, images: Sequence[Sequence[int]]):
        if len(images) != source.rank:
            raise MalformedElementError(
                f"{len(images)} images given for a source with {source.rank} basis elements"
            )
        self.source = source
        self.target = target
        self.images: Tuple[Element, ...] = tuple(target.element(y) for y in images)
        self._matrix = np.array(self.images, dtype=np.int64).reshape(source.rank, target.rank)

    def __call__(self, x: Sequence[int]) -> Element:
        if not self.target.rank:
            return ()
        v = np.asarray(self.source.element(x), dtype=np.int64) @ self._matrix
        return self.target.additive.reduce(v.tolist())

    def kernel(self) -> "Ideal":
        gens = kernel_generators(self.source.additive, self.images, self.target.invariant_factors)
        return Ideal(self.source, gens)

    def image(self) -> Subgroup:
        return subgroup_closure(self.target.additive, self.images)

    def is_injective(self) -> bool:
        return self.kernel().is_zero()

    def is_surjective(self) -> bool:
        return self.image().order == self.target.order

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and self.is_surjective()

    def __eq__(self, other):
        if not isinstance(other, RingMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.images == other.images

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def __repr__(self):
        return f"RingMap({self.source.name} -> {self.target.name}, images={list(self.images)})"


def make_map(source: FiniteRing, target: FiniteRing, images: Sequence[RingValue]) -> RingMap:
    """Validated unital ring homomorphism; checks additivity, then unit, then products"""
    if len(images) != source.rank:
        raise MalformedElementError(
            f"{len(images)} images given for a source with {source.rank} basis elements"
        )
    images = [target.coerce(y) for y in images]
    for i, (d, y) in enumerate(zip(source.invariant_factors, images)):
        if target.scale(y, d) != target.zero:
            raise MapValidationError(
                "additive", f"basis element {i} has order {d} but its image {y} has order "
                            f"{target.additive.order_of(y)}"
            )
    phi = RingMap(source, target, images)
    if phi(source.one) != target.one:
        raise MapValidationError("unital", f"one maps to {phi(source.one)}, not {target.one}")
    basis = source.basis()
    for i, a in enumerate(basis):
        for j in range(i, len(basis)):
            b = basis[j]
            if phi(source.mul(a, b)) != target.mul(images[i], images[j]):
                raise MapValidationError("multiplicative", f"phi(e_{i} e_{j}) != phi(e_{i}) phi(e_{j})")
    return phi


def identity_map(ring: FiniteRing) -> RingMap:
    return RingMap(ring, ring, ring.basis())


def compose(psi: RingMap, phi: RingMap) -> RingMap:
    """psi after phi"""
    if phi.target != psi.source:
        raise MalformedElementError(f"cannot compose {psi!r} after {phi!r}")
    return RingMap(phi.source, psi.target, [psi(y) for y in phi.images])


def is_injective(phi: RingMap) -> bool:
    return phi.is_injective()


def is_surjective(phi: RingMap) -> bool:
    return phi.is_surjective()


def is_bijective(phi: RingMap) -> bool:
    return phi.is_bijective()


def projection_map(ring: FiniteRing, index: int) -> RingMap:
    """Projection of a product ring onto one factor"""
    if ring.construction.kind != "product":
        raise MalformedElementError(f"{ring.name} is not a product ring")
    factors = ring.construction.parts
    offsets = _offsets(factors)
    factor = factors[index]
    lo, hi = offsets[index], offsets[index + 1]
    images = [factor.additive.reduce(ring.to_raw(e)[lo:hi]) for e in ring.basis()]
    return RingMap(ring, factor, images)


def product_element(ring: FiniteRing, parts: Sequence[Sequence[int]]) -> Element:
    if ring.construction.kind != "product":
        raise MalformedElementError(f"{ring.name} is not a product ring")
    raw: List[int] = []
    for factor, part in zip(ring.construction.parts, parts):
        raw.extend(factor.element(part))
    return ring.from_raw(raw)


def diagonal_map(ring: FiniteRing, copies: int = 2) -> RingMap:
    """r -> (r, ..., r) into ring^copies"""
    target = product([ring] * copies)
    return RingMap(ring, target, [product_element(target, [e] * copies) for e in ring.basis()])


def inclusion_map(ring: FiniteRing) -> RingMap:
    """base -> base[t]/(f) for a ring built by poly_quotient"""
    if ring.construction.kind != "poly_quotient":
        raise MalformedElementError(f"{ring.name} is not a polynomial quotient")
    base = ring.construction.parts[0]
    n = len(ring.construction.presentation.ambient_orders)
    images = []
    for e in base.basis():
        raw = list(e) + [0] * (n - base.rank)
        images.append(ring.from_raw(raw[:n]))
    return RingMap(base, ring, images)


def quotient_map(ring: FiniteRing) -> RingMap:
    """base -> base/I for a ring built by quotient"""
    if ring.construction.kind != "quotient":
        raise MalformedElementError(f"{ring.name} is not a quotient ring")
    base = ring.construction.parts[0]
    return RingMap(base, ring, [ring.from_raw(e) for e in base.basis()])


# ---------------------------------------------------------------------------
# Ideals
# ---------------------------------------------------------------------------

class Ideal:
    """Ideal generated by gens; the additive closure is computed on demand"""

    def __init__(self, ring: FiniteRing, gens: Sequence[Sequence[int]] = ()):
        self.ring = ring
        reduced = {ring.element(g) for g in gens}
        reduced.discard(ring.zero)
        self.gens: Tuple[Element, ...] = tuple(sorted(reduced))

    @cached_property
    def subgroup(self) -> Subgroup:
        basis = self.ring.basis()
        return Subgroup(self.ring.additive, [self.ring.mul(g, e) for g in self.gens for e in basis])

    @property
    def key(self):
        return self.subgroup.key

    @property
    def order(self) -> int:
        return self.subgroup.order

    @property
    def closure(self) -> Tuple[Element, ...]:
        return self.subgroup.elements

    @property
    def canonical_gens(self) -> Tuple[Element, ...]:
        return self.subgroup.canonical_gens

    def contains(self, x: Sequence[int]) -> bool:
        return self.subgroup.contains(x)

    __contains__ = contains

    def issubset(self, other: "Ideal") -> bool:
        return self.subgroup.issubset(other.subgroup)

    __le__ = issubset

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return self.contains(self.ring.one)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.key == other.key

    def __hash__(self):
        return hash((self.ring, self.key))

    def __repr__(self):
        return f"Ideal({self.ring.name}: <{', '.join(map(str, self.canonical_gens))}>)"


def _same_ring(a: Ideal, b: Ideal) -> FiniteRing:
    if a.ring != b.ring:
        raise MalformedElementError(f"ideals of different rings {a.ring.name} and {b.ring.name}")
    return a.ring


def ideal_from(ring: FiniteRing, gens: Sequence[RingValue]) -> Ideal:
    return Ideal(ring, [ring.coerce(g) for g in gens])


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    ring = _same_ring(a, b)
    return Ideal(ring, [ring.mul(x, y) for x in a.gens for y in b.gens])


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    ring = _same_ring(a, b)
    return Ideal(ring, a.gens + b.gens)


def ideal_intersect(a: Ideal, b: Ideal) -> Ideal:
    ring = _same_ring(a, b)
    return Ideal(ring, subgroup_intersection(a.subgroup, b.subgroup).canonical_gens)


def _multiplication_images(target: Quotient, values: Sequence[Element]) -> List[int]:
    out: List[int] = []
    for v in values:
        out.extend(target.project(v))
    return out


def colon_ideal(a: Ideal, b: Ideal) -> Ideal:
    """(a : b) = {r : r b ⊆ a}, the kernel of r -> (r g mod a) over generators g of b"""
    ring = _same_ring(a, b)
    q = a.subgroup.quotient
    orders = q.group.invariant_factors * len(b.gens)
    images = [_multiplication_images(q, [ring.mul(e, g) for g in b.gens]) for e in ring.basis()]
    return Ideal(ring, kernel_generators(ring.additive, images, orders))


def annihilator(ring: FiniteRing, elements: Sequence[RingValue]) -> Ideal:
    return colon_ideal(Ideal(ring), ideal_from(ring, elements))


def is_faithful(ideal: Ideal) -> bool:
    return annihilator(ideal.ring, ideal.gens).is_zero()


def is_regular(ring: FiniteRing, r: RingValue) -> bool:
    return ring.is_regular(ring.coerce(r))


def enumerate_ideals(ring: FiniteRing, limits: ComputeLimits = DEFAULT_LIMITS) -> List[Ideal]:
    """All ideals, sorted by order then Hermite key.

    Every ideal is a sum of principal ideals, so joining with principal ideals
    until nothing new appears is complete; above the complete-enumeration cap
    only limits.ideal_join_depth rounds are run.
    """
    limits.require("ideal enumeration", ring.order, limits.ideal_enumeration_max_order)
    principal: Dict[Any, Ideal] = {}
    for x in ring.elements():
        ideal = Ideal(ring, [x])
        principal.setdefault(ideal.key, ideal)
    found = dict(principal)
    frontier = list(principal.values())
    complete = ring.order <= limits.complete_ideal_enumeration_max_order
    rounds = 0
    while frontier and (complete or rounds < limits.ideal_join_depth):
        rounds += 1
        fresh = []
        for ideal in frontier:
            for p in principal.values():
                joined = ideal_sum(ideal, p)
                if joined.key not in found:
                    found[joined.key] = joined
                    fresh.append(joined)
        frontier = fresh
    if frontier:
        logger.warning(f"Ideal enumeration of {ring.name} stopped after {rounds} join rounds; may be incomplete")
    return sorted(found.values(), key=lambda i: (i.order, i.key))


# ---------------------------------------------------------------------------
# Finite modules
# ---------------------------------------------------------------------------

class FiniteModule:
    """Finite R-module; _action[i, a] holds the coordinates of e_i · m_a"""

    def __init__(self, ring: FiniteRing, additive: FpGroup, action, *,
                 name: Optional[str] = None, check: bool = True):
        self.ring = ring
        self.additive = additive
        kr, km = ring.rank, additive.rank
        act = np.asarray(action, dtype=np.int64).reshape(kr, km, km)
        self._factors = np.array(additive.invariant_factors, dtype=np.int64)
        if km:
            act = act % self._factors
        self._action = act
        self.name = name or f"FiniteModule({additive} over {ring.name})"
        if check:
            self._check_axioms()

    def _check_axioms(self) -> None:
        kr, km = self.ring.rank, self.additive.rank
        if not km:
            return
        d = self._factors
        for i, di in enumerate(self.ring.invariant_factors):
            if np.any((di * self._action[i]) % d):
                raise RingAxiomError("module well-definedness", f"{di} * e_{i} acts nontrivially")
        for a, da in enumerate(self.additive.invariant_factors):
            if np.any((da * self._action[:, a]) % d):
                raise RingAxiomError("module well-definedness", f"action on m_{a} ignores its order {da}")
        for a, m in enumerate(self.additive.basis()):
            if self.act(self.ring.one, m) != m:
                raise RingAxiomError("module identity", f"1 · m_{a} != m_{a}")
        left = np.einsum("ijc,can->ijan", self.ring._table, self._action) % d
        right = np.einsum("jab,ibn->ijan", self._action, self._action) % d
        if not np.array_equal(left, right):
            raise RingAxiomError("module associativity", "(rs)·m != r·(s·m) on basis elements")

    @property
    def order(self) -> int:
        return self.additive.order

    @property
    def zero(self) -> Element:
        return self.additive.zero

    def basis(self) -> List[Element]:
        return self.additive.basis()

    def elements(self) -> Iterator[Element]:
        return self.additive.elements()

    def action_table(self) -> List[List[List[int]]]:
        """Coordinates of e_i · m_a, indexed [i][a]"""
        return self._action.tolist()

    def act(self, r: Sequence[int], m: Sequence[int]) -> Element:
        kr, km = self.ring.rank, self.additive.rank
        if not km:
            return ()
        rv = np.asarray(r, dtype=np.int64)
        mv = np.asarray(m, dtype=np.int64)
        if not kr:
            return self.zero
        v = mv @ (rv @ self._action.reshape(kr, km * km)).reshape(km, km)
        return tuple(int(c) for c in v % self._factors)

    def submodule(self, gens: Sequence[Sequence[int]]) -> Subgroup:
        """R-span of gens"""
        return Subgroup(self.additive, [self.act(e, g) for g in gens for e in self.ring.basis()])

    def ideal_times(self, ideal: Ideal) -> Subgroup:
        """I·M"""
        return Subgroup(self.additive, [self.act(x, m) for x in ideal.subgroup.gens for m in self.basis()])

    def __repr__(self):
        return self.name


def module_from_presentation(ring: FiniteRing, orders: Sequence[int], relations: Sequence[Sequence[int]],
                             raw_action, *, name: Optional[str] = None) -> FiniteModule:
    """Module structure on (Z/n_1 + ...) / <relations>; relations must span a submodule"""
    quotient = present(orders, relations)
    n = len(quotient.ambient_orders)
    kr = ring.rank
    raw = np.asarray(raw_action, dtype=np.int64).reshape(kr, n, n)
    group = quotient.group
    lifts = [np.array(quotient.lift(b), dtype=np.int64) for b in group.basis()]
    action = np.zeros((kr, group.rank, group.rank), dtype=np.int64)
    for i in range(kr):
        for a, lift in enumerate(lifts):
            action[i, a] = quotient.project((lift @ raw[i]).tolist())
    return FiniteModule(ring, group, action, name=name)


def regular_module(ring: FiniteRing) -> FiniteModule:
    return FiniteModule(ring, ring.additive, ring._table, name=f"{ring.name} as a module over itself")


def quotient_module(ring: FiniteRing, ideal: Ideal) -> FiniteModule:
    return module_from_presentation(ring, ring.invariant_factors, list(ideal.subgroup.gens), ring._table,
                                    name=f"{ring.name}/<{', '.join(map(str, ideal.canonical_gens))}>")


def restriction_module(phi: RingMap) -> FiniteModule:
    """The target of phi viewed as a module over its source"""
    source, target = phi.source, phi.target
    action = [[target.mul(phi(e), m) for m in target.basis()] for e in source.basis()]
    return FiniteModule(source, target.additive, action, name=f"{target.name} over {source.name}")


def module_direct_sum(left: FiniteModule, right: FiniteModule) -> FiniteModule:
    if left.ring != right.ring:
        raise MalformedElementError("direct sum of modules over different rings")
    ring = left.ring
    kl, kr_ = left.additive.rank, right.additive.rank
    n = kl + kr_
    raw = np.zeros((ring.rank, n, n), dtype=np.int64)
    raw[:, :kl, :kl] = left._action
    raw[:, kl:, kl:] = right._action
    orders = left.additive.invariant_factors + right.additive.invariant_factors
    return module_from_presentation(ring, orders, [], raw, name=f"{left.name} + {right.name}")


def module_colon(module: FiniteModule, a: Ideal, b: Ideal) -> Tuple[Subgroup, Subgroup]:
    """((a : b)M, aM : b) as subgroups of M"""
    ring = _same_ring(a, b)
    if ring != module.ring:
        raise MalformedElementError("ideals and module over different rings")
    left = module.ideal_times(colon_ideal(a, b))
    q = module.ideal_times(a).quotient
    orders = q.group.invariant_factors * len(b.gens)
    images = [_multiplication_images(q, [module.act(g, m) for g in b.gens]) for m in module.basis()]
    right = Subgroup(module.additive, kernel_generators(module.additive, images, orders))
    return left, right


# ---------------------------------------------------------------------------
# Homomorphism search
# ---------------------------------------------------------------------------

def _signature(ring: FiniteRing, x: Element) -> Tuple[bool, bool, bool]:
    return ring.is_idempotent(x), ring.is_nilpotent(x), ring.is_unit(x)


def ring_homomorphisms(source: FiniteRing, target: FiniteRing,
                       limits: ComputeLimits = DEFAULT_LIMITS,
                       constraints: Sequence[Tuple[Element, Element]] = (),
                       isomorphisms_only: bool = False) -> Iterator[RingMap]:
    """Unital ring maps source -> target by backtracking over basis images.

    Candidates for e_i respect its additive order and its idempotent, nilpotent
    and unit status. Products, the unit and the (x -> y) constraints are
    checked as soon as every basis image they involve is assigned. Raises
    CapExceededError after limits.iso_search_max_assignments assignments.
    """
    k = source.rank
    if isomorphisms_only and (source.additive != target.additive):
        return
    if k == 0:
        if target.rank == 0 and all(y == () for _, y in constraints):
            yield RingMap(source, target, [])
        return

    basis = source.basis()
    target_elements = list(target.elements())
    target_sig = {y: _signature(target, y) for y in target_elements}
    candidates: List[List[Element]] = []
    for i, e in enumerate(basis):
        d = source.invariant_factors[i]
        sig = _signature(source, e)
        options = []
        for y in target_elements:
            if target.scale(y, d) != target.zero:
                continue
            ty = target_sig[y]
            if isomorphisms_only:
                if ty != sig or target.additive.order_of(y) != d:
                    continue
            elif (sig[0] and not ty[0]) or (sig[1] and not ty[1]) or (sig[2] and not ty[2]):
                continue
            options.append(y)
        candidates.append(options)

    def last_index(x: Sequence[int]) -> int:
        support = [i for i, c in enumerate(x) if c]
        return support[-1] if support else -1

    checks: List[List[Tuple[str, Any]]] = [[] for _ in range(k)]
    for a in range(k):
        for b in range(a, k):
            prod = source.mul(basis[a], basis[b])
            checks[max(b, last_index(prod))].append(("mul", (a, b, prod)))
    checks[max(0, last_index(source.one))].append(("one", source.one))
    for x, y in constraints:
        checks[max(0, last_index(x))].append(("fix", (source.element(x), target.element(y))))

    def image_of(x: Sequence[int], images: List[Element]) -> Element:
        return combine(target.additive, x, images)

    assignments = 0
    images: List[Element] = []

    def consistent(i: int) -> bool:
        for kind, data in checks[i]:
            if kind == "mul":
                a, b, prod = data
                if target.mul(images[a], images[b]) != image_of(prod, images):
                    return False
            elif kind == "one":
                if image_of(data, images) != target.one:
                    return False
            else:
                x, y = data
                if image_of(x, images) != y:
                    return False
        return True

    def search(i: int) -> Iterator[RingMap]:
        nonlocal assignments
        if i == k:
            phi = RingMap(source, target, images)
            if not isomorphisms_only or phi.is_bijective():
                yield phi
            return
        for y in candidates[i]:
            assignments += 1
            if assignments > limits.iso_search_max_assignments:
                raise CapExceededError("homomorphism search", assignments, limits.iso_search_max_assignments)
            images.append(y)
            if consistent(i):
                yield from search(i + 1)
            images.pop()

    yield from search(0)


def find_isomorphism(source: FiniteRing, target: FiniteRing,
                     limits: ComputeLimits = DEFAULT_LIMITS,
                     constraints: Sequence[Tuple[Element, Element]] = ()) -> Optional[RingMap]:
    """A ring isomorphism source -> target meeting the constraints, or None"""
    if source.order != target.order or source.additive != target.additive:
        return None
    for theta in ring_homomorphisms(source, target, limits, constraints, isomorphisms_only=True):
        logger.debug(f"Found isomorphism {theta!r}")
        return theta
    return None
