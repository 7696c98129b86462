"""
Exact integer linear algebra for finite abelian groups

Every additive structure in the package (rings, tensor products, cokernels,
modules of differentials) is a finite abelian group given by invariant factors
d_1 | d_2 | ... | d_k. Elements are coordinate tuples reduced mod d_i.

Matrices are numpy arrays of dtype=object so every entry stays a Python int
and no intermediate step can overflow.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import MalformedElementError

logger = logging.getLogger(__name__)

Element = Tuple[int, ...]
IntMatrix = np.ndarray


# ---------------------------------------------------------------------------
# Matrix helpers
# ---------------------------------------------------------------------------

def int_matrix(rows: Iterable[Iterable[int]], cols: Optional[int] = None) -> IntMatrix:
    """Build an exact integer matrix from nested iterables"""
    data = [[int(v) for v in row] for row in rows]
    if cols is None:
        cols = len(data[0]) if data else 0
    matrix = np.zeros((len(data), cols), dtype=object)
    for i, row in enumerate(data):
        if len(row) != cols:
            raise MalformedElementError(f"row {i} has {len(row)} entries, expected {cols}")
        for j, v in enumerate(row):
            matrix[i, j] = v
    return matrix


def identity_matrix(n: int) -> IntMatrix:
    matrix = np.zeros((n, n), dtype=object)
    for i in range(n):
        matrix[i, i] = 1
    return matrix


def zero_matrix(rows: int, cols: int) -> IntMatrix:
    matrix = np.empty((rows, cols), dtype=object)
    matrix.fill(0)
    return matrix


def _swap_rows(m: IntMatrix, a: int, b: int) -> None:
    if a != b:
        m[[a, b]] = m[[b, a]]


def _swap_cols(m: IntMatrix, a: int, b: int) -> None:
    if a != b:
        m[:, [a, b]] = m[:, [b, a]]


def _echelon(m: IntMatrix, ncols: int) -> List[int]:
    """Row-reduce m in place over the integers on its first ncols columns.

    Only unimodular row operations are used, so the row lattice is unchanged.
    Returns the pivot columns; pivot i sits in row i and is positive, and every
    row from len(pivots) on is zero in the first ncols columns.
    """
    rows = m.shape[0]
    pivots: List[int] = []
    p = 0
    for j in range(ncols):
        if p == rows:
            break
        while True:
            nonzero = [p + int(i) for i in np.nonzero(m[p:, j])[0]]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: abs(m[i, j]))
            _swap_rows(m, p, best)
            if len(nonzero) == 1:
                break
            quotients = m[p + 1:, j] // m[p, j]
            m[p + 1:] -= np.multiply.outer(quotients, m[p])
        if m[p, j] != 0:
            if m[p, j] < 0:
                m[p] = -m[p]
            pivots.append(j)
            p += 1
    return pivots


def hermite_normal_form(relations: IntMatrix, ncols: int) -> IntMatrix:
    """Canonical upper-triangular basis of a full-rank lattice in Z^ncols.

    Above-pivot entries are reduced into [0, pivot), which makes the result
    unique for the lattice.
    """
    m = np.array(relations, dtype=object).reshape(-1, ncols).copy()
    pivots = _echelon(m, ncols)
    if pivots != list(range(ncols)):
        raise MalformedElementError("relation lattice does not have full rank (infinite quotient)")
    h = m[:ncols].copy()
    for j in range(ncols):
        for i in range(j):
            q = h[i, j] // h[j, j]
            if q:
                h[i] -= q * h[j]
    return h


def _smith(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form returning (U, D, V, V^-1) with U·m·V = D"""
    a = np.array(m, dtype=object).copy()
    r, c = a.shape
    u = identity_matrix(r)
    v = identity_matrix(c)
    v_inv = identity_matrix(c)

    for t in range(min(r, c)):
        entries = [(abs(a[i, j]), i, j) for i in range(t, r) for j in range(t, c) if a[i, j] != 0]
        if not entries:
            break
        _, i0, j0 = min(entries)
        _swap_rows(a, t, i0)
        _swap_rows(u, t, i0)
        _swap_cols(a, t, j0)
        _swap_cols(v, t, j0)
        _swap_rows(v_inv, t, j0)

        while True:
            for i in range(t + 1, r):
                q = a[i, t] // a[t, t]
                if q:
                    a[i] -= q * a[t]
                    u[i] -= q * u[t]
            for j in range(t + 1, c):
                q = a[t, j] // a[t, t]
                if q:
                    a[:, j] -= q * a[:, t]
                    v[:, j] -= q * v[:, t]
                    v_inv[t] += q * v_inv[j]

            rest = [(abs(a[i, t]), i, t) for i in range(t + 1, r) if a[i, t] != 0]
            rest += [(abs(a[t, j]), t, j) for j in range(t + 1, c) if a[t, j] != 0]
            if rest:
                _, i1, j1 = min(rest)
                if j1 == t:
                    _swap_rows(a, t, i1)
                    _swap_rows(u, t, i1)
                else:
                    _swap_cols(a, t, j1)
                    _swap_cols(v, t, j1)
                    _swap_rows(v_inv, t, j1)
                continue

            # divisibility chain: pull a non-multiple into the pivot row
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if a[i, j] % a[t, t] != 0),
                None,
            )
            if bad is None:
                break
            a[t] += a[bad]
            u[t] += u[bad]

        if a[t, t] < 0:
            a[t] = -a[t]
            u[t] = -u[t]

    return u, a, v, v_inv


def smith_normal_form(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular U, V and diagonal D with U·m·V = D and d_1 | d_2 | ..."""
    u, d, v, _ = _smith(m)
    return u, d, v


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination"""
    a = np.array(m, dtype=object).copy()
    n = a.shape[0]
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i, k] != 0), None)
            if swap is None:
                return 0
            _swap_rows(a, k, swap)
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i, j] = (a[i, j] * a[k, k] - a[i, k] * a[k, j]) // prev
        prev = a[k, k]
    return sign * a[n - 1, n - 1]


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FpGroup:
    """Finite abelian group Z/d_1 + ... + Z/d_k in invariant-factor form"""
    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        for d in factors:
            if d < 2:
                raise MalformedElementError(f"invariant factor {d} must be at least 2")
        for d, e in zip(factors, factors[1:]):
            if e % d:
                raise MalformedElementError(f"invariant factors {factors} do not form a divisibility chain")

    @classmethod
    def cyclic(cls, n: int) -> "FpGroup":
        if n < 1:
            raise MalformedElementError(f"cyclic group order {n} must be positive")
        return cls(() if n == 1 else (n,))

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FpGroup":
        """Normalize a direct sum of cyclic groups of the given orders"""
        return present(orders, []).group

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        result = 1
        for d in self.invariant_factors:
            result *= d
        return result

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def basis(self) -> List[Element]:
        return [tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank)]

    def element(self, coords: Sequence[int]) -> Element:
        """Validate and reduce coordinates"""
        if len(coords) != self.rank:
            raise MalformedElementError(
                f"element {tuple(coords)} has {len(coords)} coordinates, group {self} needs {self.rank}"
            )
        try:
            return tuple(int(c) % d for c, d in zip(coords, self.invariant_factors))
        except (TypeError, ValueError) as e:
            raise MalformedElementError(f"non-integer coordinate in {coords!r}") from e

    def reduce(self, coords: Sequence[int]) -> Element:
        return tuple(int(c) % d for c, d in zip(coords, self.invariant_factors))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x: Element) -> Element:
        return tuple(-a % d for a, d in zip(x, self.invariant_factors))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def scale(self, x: Element, n: int) -> Element:
        return tuple((a * n) % d for a, d in zip(x, self.invariant_factors))

    def order_of(self, x: Element) -> int:
        result = 1
        for a, d in zip(x, self.invariant_factors):
            k = d // gcd(a, d)
            result = result * k // gcd(result, k)
        return result

    def elements(self) -> Iterator[Element]:
        """All elements in lexicographic coordinate order"""
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Quotient:
    """Z^k / L for a full-rank lattice L, with coordinate maps.

    project sends an integer vector to normalized coordinates of the quotient;
    lift is a section of project.
    """
    ambient_orders: Tuple[int, ...]
    group: FpGroup
    diagonal: Tuple[int, ...]
    v: IntMatrix = field(repr=False)
    v_inv: IntMatrix = field(repr=False)

    @cached_property
    def _kept(self) -> Tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.diagonal) if d > 1)

    def project(self, x: Sequence[int]) -> Element:
        if len(x) != len(self.ambient_orders):
            raise MalformedElementError(
                f"vector of length {len(x)} in ambient of rank {len(self.ambient_orders)}"
            )
        if not self._kept:
            return ()
        row = np.dot(np.array([int(c) for c in x], dtype=object), self.v)
        return tuple(int(row[i]) % self.diagonal[i] for i in self._kept)

    def lift(self, y: Sequence[int]) -> Element:
        y = self.group.element(y)
        full = [0] * len(self.diagonal)
        for i, c in zip(self._kept, y):
            full[i] = c
        if not full:
            return ()
        row = np.dot(np.array(full, dtype=object), self.v_inv)
        return tuple(int(c) % n if n else int(c) for c, n in zip(row, self.ambient_orders))

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.project(x))


def _present_lattice(relations: IntMatrix, k: int) -> Tuple[Tuple[int, ...], IntMatrix, IntMatrix]:
    if k == 0:
        return (), zero_matrix(0, 0), zero_matrix(0, 0)
    h = hermite_normal_form(relations, k)
    _, d, v, v_inv = _smith(h)
    diagonal = tuple(int(d[i, i]) for i in range(k))
    return diagonal, v, v_inv


def present(orders: Sequence[int], relations: Iterable[Sequence[int]]) -> Quotient:
    """Present (Z/n_1 + ... + Z/n_k) / <relations> in invariant-factor form"""
    orders = tuple(int(n) for n in orders)
    if any(n < 1 for n in orders):
        raise MalformedElementError(f"ambient orders {orders} must be positive")
    k = len(orders)
    rows = {tuple(int(c) % n for c, n in zip(rel, orders)) for rel in relations}
    rows.discard((0,) * k)
    for rel in rows:
        if len(rel) != k:
            raise MalformedElementError(f"relation {rel} does not have {k} coordinates")
    stacked = [[n if i == j else 0 for j in range(k)] for i, n in enumerate(orders)]
    stacked.extend(sorted(rows))
    diagonal, v, v_inv = _present_lattice(int_matrix(stacked, k), k)
    group = FpGroup(tuple(d for d in diagonal if d > 1))
    return Quotient(orders, group, diagonal, v, v_inv)


def quotient_presentation(ambient: FpGroup, relations: Iterable[Sequence[int]]) -> Quotient:
    """ambient / <relations> with projection and lift"""
    checked = [ambient.element(rel) for rel in relations]
    quotient = present(ambient.invariant_factors, checked)
    logger.debug(f"Presented {ambient} / <{len(checked)} relations> as {quotient.group}")
    return quotient


# ---------------------------------------------------------------------------
# Tensor products
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TensorProduct:
    """A tensor product of two groups modulo optional balancing relations.

    Raw coordinates index the pure tensors e_i (x) f_j as i * rank(right) + j.
    """
    left: FpGroup
    right: FpGroup
    quotient: Quotient
    relations: Tuple[Tuple[int, ...], ...] = ()

    @property
    def group(self) -> FpGroup:
        return self.quotient.group

    def raw_pure(self, x: Sequence[int], y: Sequence[int]) -> List[int]:
        orders = self.quotient.ambient_orders
        kb = self.right.rank
        return [(x[i] * y[j]) % orders[i * kb + j] for i in range(self.left.rank) for j in range(kb)]

    def pure_tensor(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return self.quotient.project(self.raw_pure(x, y))


def tensor_orders(left: FpGroup, right: FpGroup) -> Tuple[int, ...]:
    return tuple(gcd(d, e) for d in left.invariant_factors for e in right.invariant_factors)


def tensor_presentation(left: FpGroup, right: FpGroup,
                        relations: Iterable[Sequence[int]] = ()) -> TensorProduct:
    """left (x)_Z right, further divided by raw-coordinate relations"""
    relations = tuple(tuple(int(c) for c in rel) for rel in relations)
    quotient = present(tensor_orders(left, right), relations)
    return TensorProduct(left, right, quotient, relations)


def tensor_over_z(a: FpGroup, b: FpGroup) -> TensorProduct:
    return tensor_presentation(a, b)


# ---------------------------------------------------------------------------
# Subgroups, kernels and solving
# ---------------------------------------------------------------------------

class _Echelon:
    """Echelon form of [G | I] over [diag(orders) | 0] for kernels and solving"""

    def __init__(self, gens: Sequence[Sequence[int]], orders: Sequence[int]):
        self.m_gens = len(gens)
        self.t = len(orders)
        rows = []
        for i, g in enumerate(gens):
            rows.append(list(g) + [1 if j == i else 0 for j in range(self.m_gens)])
        for i, n in enumerate(orders):
            rows.append([n if j == i else 0 for j in range(self.t)] + [0] * self.m_gens)
        self.matrix = int_matrix(rows, self.t + self.m_gens) if rows else zero_matrix(0, self.t + self.m_gens)
        self.pivots = _echelon(self.matrix, self.t)

    def kernel(self) -> List[List[int]]:
        """Coefficient vectors c with sum c_i g_i = 0 in the target"""
        return [[int(c) for c in row[self.t:]] for row in self.matrix[len(self.pivots):]]

    def solve(self, y: Sequence[int]) -> Optional[List[int]]:
        """Coefficients c with sum c_i g_i = y, or None"""
        v = np.array([int(c) for c in y] + [0] * self.m_gens, dtype=object)
        row_of = {j: r for r, j in enumerate(self.pivots)}
        for j in range(self.t):
            if v[j] == 0:
                continue
            r = row_of.get(j)
            if r is None or v[j] % self.matrix[r, j]:
                return None
            v -= (v[j] // self.matrix[r, j]) * self.matrix[r]
        return [int(-c) for c in v[self.t:]]


def solve_combination(ambient: FpGroup, gens: Sequence[Sequence[int]],
                      y: Sequence[int]) -> Optional[List[int]]:
    """Integer coefficients c with sum c_i gens[i] = y in ambient, or None"""
    return _Echelon(gens, ambient.invariant_factors).solve(ambient.element(y))


def kernel_generators(source: FpGroup, images: Sequence[Sequence[int]],
                      target_orders: Sequence[int]) -> List[Element]:
    """Generators of the kernel of the homomorphism e_i -> images[i]"""
    if source.rank == 0:
        return []
    rows = _Echelon(images, target_orders).kernel()
    gens = {source.reduce(row) for row in rows}
    gens.discard(source.zero)
    return sorted(gens)


@dataclass(frozen=True)
class SubgroupPresentation:
    """A subgroup given its own invariant-factor coordinates"""
    group: FpGroup
    basis: Tuple[Element, ...]            # ambient elements of the new basis
    _solver: "_Echelon" = field(repr=False, compare=False)
    _quotient: Quotient = field(repr=False, compare=False)
    _ambient: FpGroup = field(repr=False, compare=False)

    def embed(self, y: Sequence[int]) -> Element:
        y = self.group.element(y)
        total = self._ambient.zero
        for c, b in zip(y, self.basis):
            total = self._ambient.add(total, self._ambient.scale(b, c))
        return total

    def coordinates(self, x: Sequence[int]) -> Element:
        coeffs = self._solver.solve(x)
        if coeffs is None:
            raise MalformedElementError(f"{tuple(x)} is not in the subgroup")
        return self._quotient.project(coeffs)


class Subgroup:
    """Subgroup of a finite abelian group spanned by generators.

    Membership, order and equality go through the Hermite normal form of the
    lattice <gens> + diag(d); elements are only enumerated on request.
    """

    def __init__(self, ambient: FpGroup, gens: Iterable[Sequence[int]]):
        self.ambient = ambient
        reduced = {ambient.element(g) for g in gens}
        reduced.discard(ambient.zero)
        self.gens: Tuple[Element, ...] = tuple(sorted(reduced))

    @cached_property
    def hnf(self) -> IntMatrix:
        k = self.ambient.rank
        rows = [[d if i == j else 0 for j in range(k)] for i, d in enumerate(self.ambient.invariant_factors)]
        rows.extend(list(g) for g in self.gens)
        if k == 0:
            return zero_matrix(0, 0)
        return hermite_normal_form(int_matrix(rows, k), k)

    @cached_property
    def key(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(c) for c in row) for row in self.hnf)

    @cached_property
    def canonical_gens(self) -> Tuple[Element, ...]:
        """Nonzero reduced Hermite rows; equal subgroups give equal tuples"""
        rows = {self.ambient.reduce(row) for row in self.key}
        rows.discard(self.ambient.zero)
        return tuple(sorted(rows))

    @property
    def index(self) -> int:
        result = 1
        for i in range(self.ambient.rank):
            result *= int(self.hnf[i, i])
        return result

    @property
    def order(self) -> int:
        return self.ambient.order // self.index

    def contains(self, x: Sequence[int]) -> bool:
        v = np.array(self.ambient.element(x), dtype=object)
        h = self.hnf
        for j in range(self.ambient.rank):
            if v[j] % h[j, j]:
                return False
            v -= (v[j] // h[j, j]) * h[j]
        return True

    __contains__ = contains

    def issubset(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.ambient == other.ambient and self.key == other.key

    def __hash__(self):
        return hash((self.ambient, self.key))

    def is_trivial(self) -> bool:
        return not self.gens

    @cached_property
    def quotient(self) -> Quotient:
        return present(self.ambient.invariant_factors, self.gens)

    @cached_property
    def elements(self) -> Tuple[Element, ...]:
        """All elements, sorted lexicographically"""
        seen = {self.ambient.zero}
        frontier = [self.ambient.zero]
        while frontier:
            x = frontier.pop()
            for g in self.gens:
                y = self.ambient.add(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return tuple(sorted(seen))

    def presentation(self) -> SubgroupPresentation:
        """Invariant-factor coordinates for the subgroup itself"""
        gens = [list(g) for g in self.gens]
        solver = _Echelon(gens, self.ambient.invariant_factors)
        relations = solver.kernel()
        m = len(gens)
        diagonal, v, v_inv = _present_lattice(int_matrix(relations, m), m) if m else ((), None, None)
        group = FpGroup(tuple(d for d in diagonal if d > 1))
        quotient = Quotient(tuple(0 for _ in range(m)), group, diagonal, v, v_inv) if m else present((), [])
        basis = [
            combine(self.ambient, [int(c) for c in v_inv[i]], self.gens)
            for i, d in enumerate(diagonal) if d > 1
        ]
        return SubgroupPresentation(group, tuple(basis), solver, quotient, self.ambient)

    def __repr__(self):
        return f"Subgroup(order={self.order}, gens={list(self.gens)})"


def subgroup_closure(ambient: FpGroup, gens: Iterable[Sequence[int]]) -> Subgroup:
    """Smallest subgroup containing gens"""
    return Subgroup(ambient, gens)


def combine(ambient: FpGroup, coeffs: Sequence[int], gens: Sequence[Element]) -> Element:
    """sum of coeffs[i] * gens[i]"""
    total = ambient.zero
    for c, g in zip(coeffs, gens):
        if c:
            total = ambient.add(total, ambient.scale(g, c))
    return total


def subgroup_intersection(a: Subgroup, b: Subgroup) -> Subgroup:
    """a ∩ b, from the kernel of (u, v) -> u - v on <gens a> + <gens b>"""
    if a.ambient != b.ambient:
        raise MalformedElementError("subgroups of different groups")
    ambient = a.ambient
    if a.is_trivial() or b.is_trivial():
        return Subgroup(ambient, [])
    images = list(a.gens) + [ambient.neg(g) for g in b.gens]
    rows = _Echelon(images, ambient.invariant_factors).kernel()
    m = len(a.gens)
    return Subgroup(ambient, [combine(ambient, row[:m], a.gens) for row in rows])
