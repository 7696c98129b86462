"""
Gabriel filters of ring maps

F_phi is the set of ideals I of R whose extension phi(I)·A is all of A. For a
flat epimorphism the filter determines the map up to isomorphism under R.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from .errors import CapExceededError, PreconditionError
from .limits import DEFAULT_LIMITS, ComputeLimits
from .rings import (
    FiniteRing,
    Ideal,
    RingMap,
    colon_ideal,
    enumerate_ideals,
    find_isomorphism,
    ideal_from,
    ideal_product,
    restriction_module,
)

logger = logging.getLogger(__name__)


@dataclass
class GabrielFilter:
    """A set of ideals of a finite ring"""
    ring: FiniteRing
    members: Tuple[Ideal, ...]

    def __post_init__(self):
        self.members = tuple(sorted(set(self.members), key=lambda i: (i.order, i.key)))
        self._keys: FrozenSet = frozenset(i.key for i in self.members)

    @property
    def keys(self) -> FrozenSet:
        return self._keys

    def __contains__(self, ideal: Ideal) -> bool:
        return ideal.key in self._keys

    def __len__(self):
        return len(self.members)

    def generator_sets(self) -> List[List[List[int]]]:
        """Each member as its sorted canonical generators"""
        return [[list(g) for g in ideal.canonical_gens] for ideal in self.members]


def extension(phi: RingMap, ideal: Ideal) -> Ideal:
    """phi(I)·A"""
    return ideal_from(phi.target, [phi(g) for g in ideal.gens])


def _complete_ideals(ring: FiniteRing, limits: ComputeLimits) -> List[Ideal]:
    limits.require("complete ideal enumeration", ring.order, limits.complete_ideal_enumeration_max_order)
    return enumerate_ideals(ring, limits)


def filter_of(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> GabrielFilter:
    ideals = _complete_ideals(phi.source, limits)
    members = [i for i in ideals if extension(phi, i).is_unit()]
    logger.debug(f"Filter of {phi!r} has {len(members)} of {len(ideals)} ideals")
    return GabrielFilter(phi.source, tuple(members))


@dataclass
class FilterAxiomReport:
    t1: bool = True     # unit ideal is a member
    t2: bool = True     # upward closed
    t3: bool = True     # closed under products
    g: bool = True      # I is a member when (I : j) is for every j in some member J
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.t1 and self.t2 and self.t3 and self.g


def verify_axioms(filt: GabrielFilter, limits: ComputeLimits = DEFAULT_LIMITS) -> FilterAxiomReport:
    ring = filt.ring
    ideals = _complete_ideals(ring, limits)
    report = FilterAxiomReport()

    if Ideal(ring, [ring.one]) not in filt:
        report.t1 = False
        report.failures.append("unit ideal is not a member")

    for i in filt.members:
        for j in ideals:
            if j not in filt and i.issubset(j):
                report.t2 = False
                report.failures.append(f"{i!r} is a member but {j!r} above it is not")

    for i in filt.members:
        for j in filt.members:
            prod = ideal_product(i, j)
            if prod not in filt:
                report.t3 = False
                report.failures.append(f"product of {i!r} and {j!r} is not a member")

    colons: Dict[Tuple, Ideal] = {}

    def colon(ideal: Ideal, x) -> Ideal:
        key = (ideal.key, x)
        if key not in colons:
            colons[key] = colon_ideal(ideal, Ideal(ring, [x]))
        return colons[key]

    for i in ideals:
        if i in filt:
            continue
        for j in filt.members:
            if all(colon(i, x) in filt for x in j.closure):
                report.g = False
                report.failures.append(f"{i!r} is not a member although (I : j) is for all j in {j!r}")
                break

    if report.failures:
        logger.warning(f"Filter on {ring.name} fails {len(report.failures)} axiom checks")
    return report


def filters_equal(a: GabrielFilter, b: GabrielFilter) -> bool:
    return a.ring == b.ring and a.keys == b.keys


class Classification(Enum):
    SAME_CLASS = "same-class"
    DIFFERENT = "different"
    UNDECIDED = "undecided"


@dataclass
class ClassifyResult:
    verdict: Classification
    filters_equal: bool
    theta: Optional[RingMap] = None      # isomorphism with theta∘phi = psi, if one was found
    searched: bool = False               # whether the isomorphism search ran to completion


def compatible_isomorphism(phi: RingMap, psi: RingMap,
                           limits: ComputeLimits = DEFAULT_LIMITS) -> Optional[RingMap]:
    """theta: A -> B with theta∘phi = psi"""
    constraints = [(phi(e), psi(e)) for e in phi.source.basis()]
    return find_isomorphism(phi.target, psi.target, limits, constraints)


def _require_flat_epi(phi: RingMap, limits: ComputeLimits) -> None:
    from .epi import is_epimorphism
    from .spectrum import is_flat_module

    if not is_epimorphism(phi, limits) or not is_flat_module(restriction_module(phi), limits):
        raise PreconditionError(f"{phi!r} is not a flat epimorphism")


def classify_flat_epis(phi: RingMap, psi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> ClassifyResult:
    """Decide whether two flat epimorphisms out of R are isomorphic under R"""
    if phi.source != psi.source:
        raise PreconditionError(f"maps out of different rings: {phi.source.name} vs {psi.source.name}")
    _require_flat_epi(phi, limits)
    _require_flat_epi(psi, limits)

    same = filters_equal(filter_of(phi, limits), filter_of(psi, limits))
    exhaustive = max(phi.target.order, psi.target.order) <= limits.exhaustive_iso_max_target
    if not same and not exhaustive:
        return ClassifyResult(Classification.DIFFERENT, same)
    try:
        theta = compatible_isomorphism(phi, psi, limits)
    except CapExceededError as e:
        logger.warning(f"Isomorphism search gave up: {e}")
        return ClassifyResult(Classification.UNDECIDED, same)
    if same and theta is not None:
        return ClassifyResult(Classification.SAME_CLASS, same, theta, searched=True)
    if same:
        logger.error(f"Equal filters but no isomorphism between {phi!r} and {psi!r}")
    elif theta is not None:
        logger.error(f"Different filters but {theta!r} identifies {phi!r} and {psi!r}")
    return ClassifyResult(Classification.DIFFERENT, same, theta, searched=True)
