"""
Epimorphism tests for ring maps

A map phi: R -> S is an epimorphism when it is right-cancellable. For finite
rings every characterization below is decidable through the tensor square
S (x)_R S, which is presented as a quotient of S (x)_Z S.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from .abelian import Element, FpGroup, Subgroup, TensorProduct, subgroup_closure, tensor_presentation
from .errors import ConditionDisagreementError, MalformedElementError
from .limits import DEFAULT_LIMITS, ComputeLimits
from .rings import (
    FiniteModule,
    FiniteRing,
    Ideal,
    RingMap,
    compose,
    ideal_product,
    restriction_module,
    ring_from_presentation,
)

logger = logging.getLogger(__name__)


class Verdict(Enum):
    """Outcome of checking an implication on one instance"""
    NOT_APPLICABLE = "not-applicable"
    CONFIRMED = "confirmed"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"


def balanced_tensor(phi: RingMap, module_group: FpGroup,
                    act: Callable[[Element, Element], Element]) -> TensorProduct:
    """S (x)_R M for an R-module M, with S an R-module through phi.

    act(r, m) is the R-action on M. The relations are
    (phi(r) e_i) (x) m_j - e_i (x) (r m_j) for basis elements r, e_i, m_j.
    """
    source, target = phi.source, phi.target
    base = tensor_presentation(target.additive, module_group)
    relations = []
    for r in source.basis():
        s = phi(r)
        for e in target.basis():
            left = target.mul(s, e)
            for m in module_group.basis():
                a = base.raw_pure(left, m)
                b = base.raw_pure(e, act(r, m))
                relations.append([x - y for x, y in zip(a, b)])
    return tensor_presentation(target.additive, module_group, relations)


class TensorSquare:
    """S (x)_R S for a ring map R -> S, with its structure maps"""

    def __init__(self, phi: RingMap):
        self.phi = phi
        self.base = phi.target
        s = self.base
        self.tensor = balanced_tensor(phi, s.additive, lambda r, m: s.mul(phi(r), m))
        logger.debug(f"Tensor square of {phi!r} has order {self.order}")

    @property
    def group(self) -> FpGroup:
        return self.tensor.group

    @property
    def order(self) -> int:
        return self.group.order

    def pure_tensor(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return self.tensor.pure_tensor(x, y)

    @cached_property
    def ring(self) -> FiniteRing:
        """(s (x) s')(u (x) u') = su (x) s'u'"""
        s = self.base
        k = s.rank
        n = k * k
        raw = self.tensor.raw_pure
        products = [[s.mul(a, b) for b in s.basis()] for a in s.basis()]
        table = np.zeros((n, n, n), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                for a in range(k):
                    for b in range(k):
                        table[i * k + j, a * k + b] = raw(products[i][a], products[j][b])
        return ring_from_presentation(
            self.tensor.quotient.ambient_orders, list(self.tensor.relations), table, raw(s.one, s.one),
            name=f"{s.name} (x) {s.name} over {self.phi.source.name}",
            check=False, presentation=self.tensor.quotient,
        )

    @cached_property
    def i_map(self) -> RingMap:
        """s -> s (x) 1"""
        return RingMap(self.base, self.ring, [self.pure_tensor(e, self.base.one) for e in self.base.basis()])

    @cached_property
    def j_map(self) -> RingMap:
        """s -> 1 (x) s"""
        return RingMap(self.base, self.ring, [self.pure_tensor(self.base.one, e) for e in self.base.basis()])

    @cached_property
    def p_map(self) -> RingMap:
        """s (x) s' -> s s'"""
        s = self.base
        products = [s.mul(a, b) for a in s.basis() for b in s.basis()]
        images = []
        for b in self.group.basis():
            raw = self.tensor.quotient.lift(b)
            total = s.zero
            for c, p in zip(raw, products):
                if c:
                    total = s.add(total, s.scale(p, c))
            images.append(total)
        return RingMap(self.ring, s, images)

    def differences(self) -> List[Element]:
        """e_b (x) 1 - 1 (x) e_b for the additive basis of S"""
        one = self.base.one
        return [self.group.sub(self.pure_tensor(e, one), self.pure_tensor(one, e)) for e in self.base.basis()]

    def multiplication_kernel(self) -> Ideal:
        """Ker(p), generated as an ideal by the finitely many differences"""
        return Ideal(self.ring, self.differences())

    def swap_is_identity(self) -> bool:
        basis = self.base.basis()
        return all(
            self.pure_tensor(a, b) == self.pure_tensor(b, a)
            for i, a in enumerate(basis) for b in basis[i + 1:]
        )

    def structure_violations(self) -> List[str]:
        """Names of the structural identities that fail (empty when all hold)"""
        violations = []
        identity = list(self.base.basis())
        if [self.p_map(y) for y in self.i_map.images] != identity:
            violations.append("p∘i = id")
        if [self.p_map(y) for y in self.j_map.images] != identity:
            violations.append("p∘j = id")
        if compose(self.i_map, self.phi) != compose(self.j_map, self.phi):
            violations.append("i∘φ = j∘φ")
        if not self.i_map.is_injective():
            violations.append("i injective")
        return violations


@lru_cache(maxsize=128)
def tensor_square(phi: RingMap) -> TensorSquare:
    return TensorSquare(phi)


def is_epi_tensor(phi: RingMap) -> bool:
    """s (x) 1 = 1 (x) s for every s in S"""
    return not any(any(d) for d in tensor_square(phi).differences())


def is_epi_mult(phi: RingMap) -> bool:
    """The multiplication map of the tensor square is bijective"""
    return tensor_square(phi).order == phi.target.order


def is_epi_i_bijective(phi: RingMap) -> bool:
    """s -> s (x) 1 is bijective"""
    square = tensor_square(phi)
    one = phi.target.one
    image = subgroup_closure(square.group, [square.pure_tensor(e, one) for e in phi.target.basis()])
    return square.order == phi.target.order and image.order == square.order


def cokernel(phi: RingMap):
    """S / phi(R) as an additive quotient"""
    return subgroup_closure(phi.target.additive, phi.images).quotient


def is_epi_coker(phi: RingMap) -> bool:
    """S (x)_R Coker(phi) = 0"""
    s = phi.target
    coker = cokernel(phi)
    if coker.group.order == 1:
        return True

    def act(r: Element, c: Element) -> Element:
        return coker.project(s.mul(phi(r), coker.lift(c)))

    return balanced_tensor(phi, coker.group, act).group.order == 1


def is_symmetric_square(phi: RingMap) -> bool:
    """The swap s (x) s' -> s' (x) s is the identity"""
    return tensor_square(phi).swap_is_identity()


def module_multiplication(phi: RingMap, module: FiniteModule) -> Tuple[TensorProduct, List[Element]]:
    """S (x)_R M and the images in M of its basis under s (x) m -> s m"""
    s = phi.target
    tensor = balanced_tensor(phi, module.additive, lambda r, m: module.act(phi(r), m))
    pairs = [(e, m) for e in s.basis() for m in module.basis()]
    images = []
    for b in tensor.group.basis():
        total = module.zero
        for c, (e, m) in zip(tensor.quotient.lift(b), pairs):
            if c:
                total = module.additive.add(total, module.additive.scale(module.act(e, m), c))
        images.append(total)
    return tensor, images


def check_module_condition(phi: RingMap, module: FiniteModule) -> bool:
    """S (x)_R M -> M, s (x) m -> s m, is bijective for the S-module M"""
    if module.ring != phi.target:
        raise MalformedElementError(f"{module.name} is not a module over {phi.target.name}")
    tensor, images = module_multiplication(phi, module)
    surjective = subgroup_closure(module.additive, images).order == module.order
    return surjective and tensor.group.order == module.order


@dataclass
class EpiConditions:
    """Every implemented characterization evaluated on one map"""
    tensor: bool
    mult: bool
    i_bijective: bool
    coker: bool
    symmetric: bool

    @property
    def agree(self) -> bool:
        return len({self.tensor, self.mult, self.i_bijective, self.coker, self.symmetric}) == 1

    def as_dict(self) -> Dict[str, bool]:
        return {"tensor": self.tensor, "mult": self.mult, "i_bijective": self.i_bijective,
                "coker": self.coker, "symmetric": self.symmetric}


def epi_conditions(phi: RingMap) -> EpiConditions:
    return EpiConditions(
        tensor=is_epi_tensor(phi),
        mult=is_epi_mult(phi),
        i_bijective=is_epi_i_bijective(phi),
        coker=is_epi_coker(phi),
        symmetric=is_symmetric_square(phi),
    )


def is_epimorphism(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
    """Epimorphism verdict; in paranoid mode every characterization must agree"""
    if not limits.paranoid:
        return is_epi_tensor(phi)
    conditions = epi_conditions(phi)
    if not conditions.agree:
        raise ConditionDisagreementError(f"epimorphism conditions disagree on {phi!r}: {conditions.as_dict()}")
    return conditions.tensor


@dataclass
class KaehlerModule:
    """J/J² for J the kernel of the multiplication map"""
    group: FpGroup
    module: FiniteModule                  # S-action s·x = (s (x) 1) x
    generators: Tuple[Element, ...]       # images of e_b (x) 1 - 1 (x) e_b

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return self.group.invariant_factors

    def is_zero(self) -> bool:
        return self.order == 1


def kaehler(phi: RingMap) -> KaehlerModule:
    """Module of differentials as J/J²"""
    square = tensor_square(phi)
    ring = square.ring
    j = square.multiplication_kernel()
    j2 = ideal_product(j, j)
    q = j2.subgroup.quotient
    image = Subgroup(q.group, [q.project(g) for g in j.subgroup.gens])
    presentation = image.presentation()
    omega = presentation.group
    generators = tuple(presentation.coordinates(q.project(g)) for g in square.differences())

    s = phi.target
    i_map = square.i_map
    action = []
    for e in s.basis():
        lifted = i_map(e)
        row = []
        for w in omega.basis():
            x = q.lift(presentation.embed(w))
            row.append(presentation.coordinates(q.project(ring.mul(lifted, x))))
        action.append(row)
    module = FiniteModule(s, omega, action, name=f"Omega({s.name}/{phi.source.name})")
    logger.debug(f"Kaehler differentials of {phi!r}: {omega}")
    return KaehlerModule(omega, module, generators)


# ---------------------------------------------------------------------------
# Consequences checked per instance
# ---------------------------------------------------------------------------

def verify_faithfully_flat_epi_iso(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> Verdict:
    """A faithfully flat epimorphism is bijective"""
    from .spectrum import is_flat_module, spec_map_surjective

    if not is_epimorphism(phi, limits):
        return Verdict.NOT_APPLICABLE
    if not is_flat_module(restriction_module(phi), limits) or not spec_map_surjective(phi, limits):
        return Verdict.NOT_APPLICABLE
    return Verdict.CONFIRMED if phi.is_bijective() else Verdict.COUNTEREXAMPLE


def verify_field_epi_iso(phi: RingMap, limits: ComputeLimits = DEFAULT_LIMITS) -> Verdict:
    """An epimorphism from a finite field into a nonzero ring is bijective"""
    if not phi.source.is_field() or phi.target.is_zero_ring():
        return Verdict.NOT_APPLICABLE
    if not is_epimorphism(phi, limits):
        return Verdict.NOT_APPLICABLE
    return Verdict.CONFIRMED if phi.is_bijective() else Verdict.COUNTEREXAMPLE


def verify_injective_factorization(g: RingMap, h: RingMap,
                                   limits: ComputeLimits = DEFAULT_LIMITS) -> Verdict:
    """If h∘g is injective and g is a flat epimorphism then h is injective"""
    from .spectrum import is_flat_module

    if not compose(h, g).is_injective():
        return Verdict.NOT_APPLICABLE
    if not is_epimorphism(g, limits) or not is_flat_module(restriction_module(g), limits):
        return Verdict.NOT_APPLICABLE
    return Verdict.CONFIRMED if h.is_injective() else Verdict.COUNTEREXAMPLE
