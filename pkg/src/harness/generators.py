"""
Instance generators for the verification suites

The built-in zoo holds Z/n for n <= 16, products of those up to order 64 and
polynomial quotients over Z/2, Z/3 and Z/4 with monic moduli of degree at most
3. Every generated instance draws from its own numpy substream, spawned from a
single SeedSequence, so a stream depends only on the seed.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..core.abelian import Element
from ..core.errors import CapExceededError, MapValidationError
from ..core.limits import ComputeLimits
from ..core.poly import Poly
from ..core.rings import (
    FiniteModule,
    FiniteRing,
    Ideal,
    RingMap,
    compose,
    diagonal_map,
    enumerate_ideals,
    identity_map,
    inclusion_map,
    make_map,
    module_direct_sum,
    poly_quotient,
    product,
    product_element,
    quotient,
    quotient_map,
    quotient_module,
    regular_module,
    restriction_module,
    ring_homomorphisms,
    zmod,
)

logger = logging.getLogger(__name__)

FAMILIES = ("identity", "surjection", "factor", "diagonal", "poly_inclusion", "random")

DEFAULT_WEIGHTS: Dict[str, float] = {
    "identity": 1.0,
    "surjection": 3.0,
    "factor": 3.0,
    "diagonal": 2.0,
    "poly_inclusion": 3.0,
    "random": 3.0,
}


# ---------------------------------------------------------------------------
# Zoo
# ---------------------------------------------------------------------------

def _monic_moduli(base: FiniteRing, degree: int) -> Iterator[List[Element]]:
    for tail in itertools.product(list(base.elements()), repeat=degree):
        yield list(tail) + [base.one]


@lru_cache(maxsize=4)
def builtin_zoo(max_order: int = 64) -> Tuple[FiniteRing, ...]:
    rings: List[FiniteRing] = [zmod(n) for n in range(1, 17) if n <= max_order]

    small = list(range(2, 17))
    for a, b in itertools.combinations_with_replacement(small, 2):
        if a * b <= max_order:
            rings.append(product([zmod(a), zmod(b)]))
    for a, b, c in itertools.combinations_with_replacement((2, 3, 4), 3):
        if a * b * c <= max_order:
            rings.append(product([zmod(a), zmod(b), zmod(c)]))

    for n in (2, 3, 4):
        base = zmod(n)
        for degree in (1, 2, 3):
            if n ** degree > max_order:
                continue
            for modulus in _monic_moduli(base, degree):
                rings.append(poly_quotient(base, modulus))

    logger.debug(f"Built-in zoo has {len(rings)} rings of order at most {max_order}")
    return tuple(rings)


def zoo_modules(ring: FiniteRing, limits: ComputeLimits, max_order: int = 64) -> List[FiniteModule]:
    """R, R/I for every nonzero ideal I, direct sums of two nonzero ones up to
    max_order, and the targets of the flat epimorphisms out of R"""
    cyclic = [regular_module(ring)]
    for ideal in enumerate_ideals(ring, limits):
        if not ideal.is_zero():
            cyclic.append(quotient_module(ring, ideal))
    modules = list(cyclic)
    nonzero = [m for m in cyclic if m.order > 1]
    for left, right in itertools.combinations_with_replacement(nonzero, 2):
        if left.order * right.order <= max_order:
            modules.append(module_direct_sum(left, right))
    modules.extend(restriction_module(phi) for phi in flat_epimorphisms_from(ring))
    return modules


# ---------------------------------------------------------------------------
# Map families
# ---------------------------------------------------------------------------

def random_element(ring: FiniteRing, rng: np.random.Generator) -> Element:
    return tuple(int(rng.integers(d)) for d in ring.invariant_factors)


def surjections(ring: FiniteRing) -> List[RingMap]:
    """R -> R/(x) for each distinct principal ideal (x)"""
    seen = set()
    maps = []
    for x in ring.elements():
        ideal = Ideal(ring, [x])
        if ideal.key in seen:
            continue
        seen.add(ideal.key)
        maps.append(quotient_map(quotient(ring, list(ideal.canonical_gens))))
    return maps


def factor_projections(ring: FiniteRing) -> List[RingMap]:
    """R -> R/(1 - e) ≅ eR for each idempotent e other than 0 and 1"""
    maps = []
    for e in ring.elements():
        if any(e) and e != ring.one and ring.is_idempotent(e):
            maps.append(quotient_map(quotient(ring, [ring.sub(ring.one, e)])))
    return maps


def graph_map(phi: RingMap) -> RingMap:
    """r -> (r, phi(r)) into R x S"""
    ring = phi.source
    target = product([ring, phi.target])
    return RingMap(ring, target, [product_element(target, [e, phi(e)]) for e in ring.basis()])


def poly_inclusion(base: FiniteRing, modulus: Sequence) -> RingMap:
    return inclusion_map(poly_quotient(base, modulus))


def flat_epimorphisms_from(ring: FiniteRing) -> List[RingMap]:
    """Identity, idempotent-factor projections and their copies through
    F -> F[t]/(t - 1); all of them are flat epimorphisms"""
    maps = [identity_map(ring)]
    for pi in factor_projections(ring):
        maps.append(pi)
        factor = pi.target
        if factor.description is not None:
            maps.append(compose(poly_inclusion(factor, [factor.neg(factor.one), factor.one]), pi))
    return maps


@dataclass
class MapInstance:
    index: int
    family: str
    phi: RingMap


@dataclass
class InstanceGenerator:
    """Deterministic stream of generated instances"""
    seed: int = 7
    max_ring_order: int = 64
    weights: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    limits: ComputeLimits = field(default_factory=ComputeLimits)
    random_attempts: int = 20

    def __post_init__(self):
        unknown = set(self.weights) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown map families {sorted(unknown)}")
        self._zoo = [r for r in builtin_zoo() if r.order <= self.max_ring_order]
        self._families = [f for f in FAMILIES if self.weights.get(f, 0) > 0]
        total = sum(self.weights[f] for f in self._families)
        self._probabilities = [self.weights[f] / total for f in self._families]
        self._builders: Dict[str, Callable[[np.random.Generator], Optional[RingMap]]] = {
            "identity": self._identity,
            "surjection": self._surjection,
            "factor": self._factor,
            "diagonal": self._diagonal,
            "poly_inclusion": self._poly_inclusion,
            "random": self._random,
        }

    @property
    def zoo(self) -> List[FiniteRing]:
        return list(self._zoo)

    def streams(self, count: int) -> List[np.random.Generator]:
        return [np.random.default_rng(s) for s in np.random.SeedSequence(self.seed).spawn(count)]

    def pick_ring(self, rng: np.random.Generator, max_order: Optional[int] = None,
                  predicate: Optional[Callable[[FiniteRing], bool]] = None) -> FiniteRing:
        # the zero ring only shows up as a target, through R -> R/(1)
        cap = max_order or self.max_ring_order
        pool = [r for r in self._zoo if 1 < r.order <= cap and (predicate is None or predicate(r))]
        return pool[int(rng.integers(len(pool)))]

    # -- families -------------------------------------------------------------

    def _identity(self, rng: np.random.Generator) -> Optional[RingMap]:
        return identity_map(self.pick_ring(rng))

    def _surjection(self, rng: np.random.Generator) -> Optional[RingMap]:
        ring = self.pick_ring(rng)
        target = quotient(ring, [random_element(ring, rng)])
        return quotient_map(target)

    def _factor(self, rng: np.random.Generator) -> Optional[RingMap]:
        ring = self.pick_ring(rng)
        candidates = factor_projections(ring)
        if not candidates:
            return None
        return candidates[int(rng.integers(len(candidates)))]

    def _diagonal(self, rng: np.random.Generator) -> Optional[RingMap]:
        ring = self.pick_ring(rng, max_order=int(self.max_ring_order ** 0.5))
        if rng.random() < 0.5:
            return diagonal_map(ring)
        return graph_map(quotient_map(quotient(ring, [random_element(ring, rng)])))

    def _poly_inclusion(self, rng: np.random.Generator) -> Optional[RingMap]:
        base = self.pick_ring(rng, max_order=16)
        degrees = [d for d in (1, 2, 3) if base.order ** d <= self.max_ring_order]
        degree = degrees[int(rng.integers(len(degrees)))]
        modulus = [random_element(base, rng) for _ in range(degree)] + [base.one]
        return poly_inclusion(base, modulus)

    def _random(self, rng: np.random.Generator) -> Optional[RingMap]:
        source = self.pick_ring(rng)
        target = self.pick_ring(rng)
        for _ in range(self.random_attempts):
            images = [random_element(target, rng) for _ in source.basis()]
            try:
                return make_map(source, target, images)
            except MapValidationError:
                continue
        try:
            homs = list(itertools.islice(ring_homomorphisms(source, target, self.limits), 64))
        except CapExceededError:
            return None
        if not homs:
            return None
        return homs[int(rng.integers(len(homs)))]

    # -- streams --------------------------------------------------------------

    def map_instance(self, index: int, rng: np.random.Generator) -> MapInstance:
        for _ in range(16):
            family = self._families[int(rng.choice(len(self._families), p=self._probabilities))]
            phi = self._builders[family](rng)
            if phi is not None and phi.source.order <= self.max_ring_order \
                    and phi.target.order <= self.max_ring_order:
                return MapInstance(index, family, phi)
        return MapInstance(index, "identity", identity_map(self.pick_ring(rng)))

    def maps(self, count: int) -> Iterator[MapInstance]:
        for index, rng in enumerate(self.streams(count)):
            instance = self.map_instance(index, rng)
            logger.debug(f"Instance {index}: {instance.family} {instance.phi!r}")
            yield instance

    def random_poly(self, rng: np.random.Generator, ring: FiniteRing, max_degree: int,
                    variables: Sequence[str] = ("x",), max_terms: Optional[int] = None) -> Poly:
        """Random coefficients on a random set of monomials of total degree <= max_degree"""
        monomials = [e for e in itertools.product(range(max_degree + 1), repeat=len(variables))
                     if sum(e) <= max_degree]
        if max_terms is None or max_terms >= len(monomials):
            chosen = monomials
        else:
            picks = rng.choice(len(monomials), size=max_terms, replace=False)
            chosen = [monomials[int(i)] for i in sorted(picks)]
        return Poly(ring, variables, {e: random_element(ring, rng) for e in chosen})


def generate_maps(gen: InstanceGenerator, count: int) -> Iterator[MapInstance]:
    return gen.maps(count)
