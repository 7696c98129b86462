"""
Prime spectra of finite rings

A finite commutative ring is the product of the local rings e·R over its
primitive idempotents e, so Spec(R) is finite and discrete: one maximal ideal
per factor, with residue field e·R modulo its nilradical.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from sympy import factorint

from .abelian import Element, Subgroup, kernel_generators
from .epi import Verdict, is_epimorphism, kaehler, tensor_square
from .limits import DEFAULT_LIMITS, ComputeLimits
from .rings import (
    FiniteModule,
    FiniteRing,
    Ideal,
    RingMap,
    enumerate_ideals,
    ideal_from,
    module_colon,
    quotient,
    quotient_map,
    restriction_module,
)

logger = logging.getLogger(__name__)


@dataclass
class LocalDecomposition:
    """R ≅ e_1 R x ... x e_m R over the primitive idempotents"""
    ring: FiniteRing
    idempotents: Tuple[Element, ...]
    factors: Tuple[FiniteRing, ...]          # R/(1 - e_i) ≅ e_i R
    projections: Tuple[RingMap, ...]         # R -> factor i

    def embed(self, index: int, x: Element) -> Element:
        """factor i -> e_i R inside R (not unital)"""
        return self.ring.mul(self.idempotents[index], self.factors[index].to_raw(x))

    def __len__(self):
        return len(self.idempotents)


@lru_cache(maxsize=256)
def _decompose(ring: FiniteRing) -> LocalDecomposition:
    idempotents = [x for x in ring.elements() if any(x) and ring.is_idempotent(x)]
    primitive = tuple(sorted(
        e for e in idempotents
        if not any(f != e and ring.mul(f, e) == f for f in idempotents)
    ))

    total = ring.zero
    for i, e in enumerate(primitive):
        total = ring.add(total, e)
        for f in primitive[i + 1:]:
            if any(ring.mul(e, f)):
                raise AssertionError(f"primitive idempotents {e} and {f} of {ring.name} are not orthogonal")
    if total != ring.one:
        raise AssertionError(f"primitive idempotents of {ring.name} do not sum to one")

    factors = []
    for e in primitive:
        factor = quotient(ring, [ring.sub(ring.one, e)])
        if not factor.is_local():
            raise AssertionError(f"factor {factor.name} of {ring.name} is not local")
        factors.append(factor)
    projections = tuple(quotient_map(f) for f in factors)
    logger.debug(f"{ring.name} splits into {[f.order for f in factors]}")
    return LocalDecomposition(ring, primitive, tuple(factors), projections)


def decompose(ring: FiniteRing, limits: ComputeLimits = DEFAULT_LIMITS) -> LocalDecomposition:
    """Primitive idempotents by a full element scan"""
    limits.require("idempotent scan", ring.order, limits.decompose_max_order)
    return _decompose(ring)


@lru_cache(maxsize=256)
def nilradical(ring: FiniteRing) -> Ideal:
    return Ideal(ring, [x for x in ring.elements() if ring.is_nilpotent(x)])


@dataclass
class PrimePoint:
    """A maximal ideal of R, equivalently a local factor"""
    index: int
    ideal: Ideal
    residue_field: FiniteRing
    residue_map: RingMap = field(repr=False)

    @property
    def characteristic(self) -> int:
        (p, _), = factorint(self.residue_field.order).items()
        return p

    @property
    def residue_order(self) -> int:
        return self.residue_field.order


@lru_cache(maxsize=256)
def _primes(ring: FiniteRing) -> Tuple[PrimePoint, ...]:
    decomposition = _decompose(ring)
    nil = nilradical(ring)
    points = []
    for i, e in enumerate(decomposition.idempotents):
        ideal = Ideal(ring, (ring.sub(ring.one, e),) + nil.gens)
        field_ring = quotient(ring, ideal.canonical_gens)
        if len(factorint(field_ring.order)) != 1 or not field_ring.is_field():
            raise AssertionError(f"residue ring {field_ring.name} of {ring.name} is not a field")
        points.append(PrimePoint(i, ideal, field_ring, quotient_map(field_ring)))
    return tuple(points)


def primes(ring: FiniteRing, limits: ComputeLimits = DEFAULT_LIMITS) -> List[PrimePoint]:
    """One prime per local factor, in idempotent order"""
    limits.require("idempotent scan", ring.order, limits.decompose_max_order)
    return list(_primes(ring))


def preimage(phi: RingMap, ideal: Ideal) -> Ideal:
    """phi^-1(ideal)"""
    q = ideal.subgroup.quotient
    images = [q.project(y) for y in phi.images]
    return Ideal(phi.source, kernel_generators(phi.source.additive, images, q.group.invariant_factors))


def spec_map(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> Dict[int, int]:
    """Index of phi^-1(q) among the primes of R, for every prime q of S"""
    source_primes = primes(phi.source, limits)
    mapping = {}
    for q in primes(phi.target, limits):
        pulled = preimage(phi, q.ideal)
        match = next((p.index for p in source_primes if p.ideal == pulled), None)
        if match is None:
            raise AssertionError(f"preimage of prime {q.index} under {phi!r} is not prime")
        mapping[q.index] = match
    return mapping


def spec_map_injective(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
    mapping = spec_map(phi, limits)
    return len(set(mapping.values())) == len(mapping)


def spec_map_surjective(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
    return set(spec_map(phi, limits).values()) == set(range(len(primes(phi.source, limits))))


def residue_maps_bijective(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
    """Every κ(p) -> κ(q) is onto; a field map is injective, so compare orders"""
    source_primes = primes(phi.source, limits)
    target_primes = primes(phi.target, limits)
    return all(
        source_primes[p].residue_order == target_primes[q].residue_order
        for q, p in spec_map(phi, limits).items()
    )


@dataclass
class Prop2Report:
    """(a) Spec map injective, (b) residue maps epimorphisms, (c) Ker(p)
    finitely generated, (d) Ω = 0"""
    a: bool
    b: bool
    c: bool
    d: bool
    c_reason: str = "S is finite, so Ker(p) is a finitely generated ideal"

    @property
    def all(self) -> bool:
        return self.a and self.b and self.c and self.d

    def as_dict(self) -> Dict[str, bool]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d, "all": self.all}


def check_prop2(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> Prop2Report:
    return Prop2Report(
        a=spec_map_injective(phi, limits),
        b=residue_maps_bijective(phi, limits),
        c=True,
        d=kaehler(phi).is_zero(),
    )


def check_geo_v(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
    """Spec map injective, Ω = 0 and every residue extension purely inseparable.

    Finite fields are perfect, so purely inseparable means trivial here.
    """
    return (spec_map_injective(phi, limits) and kaehler(phi).is_zero()
            and residue_maps_bijective(phi, limits))


def check_geo_ii(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
    """Spec map injective and κ(p) -> S_q ⊗ κ(p) an epimorphism for each q over p.

    S_q ⊗_R κ(p) = S_q / p·S_q is nonzero and receives a field, so the map is an
    epimorphism exactly when the orders agree.
    """
    if not spec_map_injective(phi, limits):
        return False
    s = phi.target
    source_primes = primes(phi.source, limits)
    target = decompose(s, limits)
    for q, p in spec_map(phi, limits).items():
        prime = source_primes[p]
        f = target.idempotents[q]
        ideal = ideal_from(s, [s.sub(s.one, f)] + [phi(g) for g in prime.ideal.gens])
        if s.order // ideal.order != prime.residue_order:
            return False
    return True


def check_geo_iv(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
    """Ω = 0 and the two maps S -> S⊗S -> κ agree for every residue field κ of
    the tensor square; an element dies in every residue field iff it is nilpotent"""
    if not kaehler(phi).is_zero():
        return False
    square = tensor_square(phi)
    return all(square.ring.is_nilpotent(d) for d in square.differences())


# ---------------------------------------------------------------------------
# Flatness
# ---------------------------------------------------------------------------

def _log(value: int, base: int) -> Optional[int]:
    n = 0
    while value > 1:
        if value % base:
            return None
        value //= base
        n += 1
    return n


def is_flat_module(module: FiniteModule, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
    """Flat over a finite ring means free on every local factor.

    On the factor of e, the rank is the dimension of M_e / p M_e over κ(p) and
    M_e is free iff |M_e| = |e R|^rank.
    """
    ring = module.ring
    decomposition = decompose(ring, limits)
    for point, e in zip(primes(ring, limits), decomposition.idempotents):
        piece = Subgroup(module.additive, [module.act(e, m) for m in module.basis()])
        reduced = Subgroup(module.additive, [module.act(x, m) for x in point.ideal.subgroup.gens
                                             for m in piece.gens])
        rank = _log(piece.order // reduced.order, point.residue_order)
        if rank is None:
            raise AssertionError(f"M_e / p M_e is not a vector space over {point.residue_field.name}")
        if piece.order != ring.multiples(e).order ** rank:
            logger.debug(f"{module.name} is not free on the factor of {e}")
            return False
    return True


def colon_condition_failure(module: FiniteModule, limits: ComputeLimits = DEFAULT_LIMITS
                            ) -> Optional[Tuple[Ideal, Ideal]]:
    """A pair (I, J) with (I:J)M != IM:J, or None if all enumerated pairs agree"""
    ideals = enumerate_ideals(module.ring, limits)
    for a in ideals:
        for b in ideals:
            left, right = module_colon(module, a, b)
            if left != right:
                return a, b
    return None


def flatness_witness(module: FiniteModule, limits: ComputeLimits = DEFAULT_LIMITS
                     ) -> Optional[Tuple[Ideal, Element]]:
    """An ideal I and element a with (I:a)M != IM:a, or None"""
    ring = module.ring
    for ideal in enumerate_ideals(ring, limits):
        for a in ring.elements():
            left, right = module_colon(module, ideal, Ideal(ring, [a]))
            if left != right:
                return ideal, a
    return None


def is_faithfully_flat(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
    return is_flat_module(restriction_module(phi), limits) and spec_map_surjective(phi, limits)


def check_local_iso(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> Verdict:
    """For a flat epimorphism every R_p -> S_q with q over p is bijective"""
    if not is_epimorphism(phi, limits) or not is_flat_module(restriction_module(phi), limits):
        return Verdict.NOT_APPLICABLE
    source = decompose(phi.source, limits)
    target = decompose(phi.target, limits)
    for q, p in spec_map(phi, limits).items():
        r_p, s_q = source.factors[p], target.factors[q]
        to_s_q = target.projections[q]
        local = RingMap(r_p, s_q, [to_s_q(phi(source.embed(p, e))) for e in r_p.basis()])
        if not local.is_bijective():
            logger.warning(f"Local map {local!r} of flat epimorphism {phi!r} is not bijective")
            return Verdict.COUNTEREXAMPLE
    return Verdict.CONFIRMED
