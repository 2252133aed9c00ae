"""Sparse exact measures on cube powers X^(2^k) and their symmetries.

A point of the k-cube power is a tuple of 2^k base-point ids indexed by
vertex bitmask: bit i-1 of the mask holds digit i of the vertex, and the
all-zeros mask is the origin vertex.  Measures store only strictly positive
masses.  The central constructor is the relative self-product over the
invariant sets of a permutation: inside each orbit cell of the permutation
(restricted to the support) the two copies are coupled independently and
normalized by the cell mass.  Iterating this once per transformation yields
the cube measure of the system, whose support grows per stage by at most a
factor of the acting permutation's period, never by squaring.

Stage j of the iteration writes the two factors into digit j, first factor
at digit value 0.  Under this convention the measure is invariant under
every diagonal transformation (the same permutation on all coordinates) and
every side transformation (the permutation on coordinates whose digit i is
0, identity elsewhere), and re-indexing the digits by a permutation maps
the cube measure of one transformation order to the cube measure of the
permuted order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import InvariantViolationError, StructuralError, SupportCapError
from .parallel import ordered_map
from .perms import Perm, inverse, is_permutation
from .system import FiniteSystem, Observable

SUPPORT_CAP_DEFAULT = 10_000_000

CubePoint = tuple[int, ...]
TupleMap = Callable[[CubePoint], CubePoint]


@dataclass(frozen=True)
class Vertex:
    """Vertex of the k-cube; digit i (1-based) is bit i-1 of ``bits``."""

    k: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << self.k):
            raise StructuralError(
                f"vertex bits {self.bits} out of range for dimension {self.k}"
            )

    @staticmethod
    def origin(k: int) -> "Vertex":
        return Vertex(k, 0)

    def digit(self, i: int) -> int:
        if not 1 <= i <= self.k:
            raise StructuralError(f"digit {i} out of range 1..{self.k}")
        return (self.bits >> (i - 1)) & 1

    def flip(self, i: int) -> "Vertex":
        if not 1 <= i <= self.k:
            raise StructuralError(f"digit {i} out of range 1..{self.k}")
        return Vertex(self.k, self.bits ^ (1 << (i - 1)))

    def __repr__(self) -> str:
        return f"Vertex({format(self.bits, f'0{max(self.k, 1)}b')[::-1]})"


def vertex_bits(vertex, k: int) -> int:
    """Accept a Vertex or a raw bitmask int; validate against dimension k."""
    if isinstance(vertex, Vertex):
        if vertex.k != k:
            raise StructuralError(f"vertex dimension {vertex.k} differs from {k}")
        return vertex.bits
    bits = int(vertex)
    if not 0 <= bits < (1 << k):
        raise StructuralError(f"vertex bits {bits} out of range for dimension {k}")
    return bits


@dataclass
class SparseCubeMeasure:
    """Probability measure on X^(2^k) as a map from cube points to masses.

    Entries are pruned to strictly positive mass and must sum to exactly 1.
    Treat instances as immutable; operations always return fresh measures.
    """

    k: int
    base_n: int
    entries: dict[CubePoint, Fraction]

    @property
    def width(self) -> int:
        return 1 << self.k

    def support_size(self) -> int:
        return len(self.entries)

    def total_mass(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    def items_sorted(self) -> list[tuple[CubePoint, Fraction]]:
        return sorted(self.entries.items())

    def check(self) -> "SparseCubeMeasure":
        """Raise unless masses are positive, normalized, and well-indexed."""
        for point, mass in self.entries.items():
            if len(point) != self.width:
                raise InvariantViolationError(
                    f"cube point {point} has length {len(point)}, expected {self.width}"
                )
            if any(not 0 <= c < self.base_n for c in point):
                raise InvariantViolationError(f"cube point {point} indexes outside base")
            if mass <= 0:
                raise InvariantViolationError(f"non-positive mass {mass} at {point}")
        if self.total_mass() != 1:
            raise InvariantViolationError(f"total mass {self.total_mass()} != 1")
        return self

    def __repr__(self) -> str:
        return f"SparseCubeMeasure(k={self.k}, support={self.support_size()})"


def measure_from_weights(weights: Sequence[Fraction]) -> SparseCubeMeasure:
    """The base measure as a 0-cube measure; zero-weight points are pruned."""
    entries = {(x,): Fraction(w) for x, w in enumerate(weights) if w > 0}
    return SparseCubeMeasure(0, len(weights), entries)


def normalize_order(sys: FiniteSystem, order: Sequence[int]) -> tuple[int, ...]:
    order = tuple(int(i) for i in order)
    if not order:
        raise StructuralError("transformation order must be nonempty")
    if len(set(order)) != len(order):
        raise StructuralError(f"transformation order {order} repeats an index")
    for i in order:
        if not 0 <= i < sys.d:
            raise StructuralError(f"transform index {i} out of range 0..{sys.d - 1}")
    return order


def relative_self_product(
    m: SparseCubeMeasure,
    perm: Perm,
    cap: int = SUPPORT_CAP_DEFAULT,
    threads: int = 1,
) -> SparseCubeMeasure:
    """Self-coupling of ``m`` that is independent inside each orbit cell.

    ``perm`` acts on cube points coordinatewise and must preserve ``m``
    entrywise.  With cells C the orbits of that action restricted to the
    support, the output gives mass m(y) * m(y') / m(C) to the concatenated
    point (y, y') whenever y and y' lie in the same cell.  The two factors
    occupy the new highest digit, first factor at digit value 0.
    """
    if len(perm) != m.base_n:
        raise StructuralError("permutation length does not match the base point count")

    def act(point: CubePoint) -> CubePoint:
        return tuple(perm[c] for c in point)

    for point, mass in m.entries.items():
        image = act(point)
        if m.entries.get(image) != mass:
            raise InvariantViolationError(
                f"permutation does not preserve the measure at {point}"
            )

    cells: list[list[CubePoint]] = []
    seen: set[CubePoint] = set()
    for point in sorted(m.entries):
        if point in seen:
            continue
        cell = [point]
        seen.add(point)
        q = act(point)
        while q != point:
            cell.append(q)
            seen.add(q)
            q = act(q)
        cells.append(cell)

    needed = sum(len(c) * len(c) for c in cells)
    if needed > cap:
        raise SupportCapError(needed, cap)

    def cell_entries(cell: list[CubePoint]) -> list[tuple[CubePoint, Fraction]]:
        cw = sum((m.entries[p] for p in cell), Fraction(0))
        return [(p + q, m.entries[p] * m.entries[q] / cw) for p in cell for q in cell]

    entries: dict[CubePoint, Fraction] = {}
    for chunk in ordered_map(cell_entries, cells, threads):
        entries.update(chunk)
    return SparseCubeMeasure(m.k + 1, m.base_n, entries)


def build_box_measure(
    sys: FiniteSystem,
    order: Sequence[int],
    cap: int = SUPPORT_CAP_DEFAULT,
    threads: int = 1,
) -> SparseCubeMeasure:
    """Iterated relative self-product over the transforms named by ``order``.

    Stage j couples two copies of the stage j-1 measure over the orbit
    cells of transform order[j-1] acting diagonally, writing the copies
    into digit j.  All 2^d marginals of the result equal the base weights.
    """
    order = normalize_order(sys, order)
    m = measure_from_weights(sys.weights)
    for idx in order:
        m = relative_self_product(m, sys.transforms[idx], cap=cap, threads=threads)
    return m


def diagonal_transform(perm: Perm, k: int) -> TupleMap:
    """The map applying ``perm`` to every coordinate of a k-cube point."""

    def apply(point: CubePoint) -> CubePoint:
        return tuple(perm[c] for c in point)

    return apply


def side_transform(perm: Perm, k: int, digit: int, invert: bool = False) -> TupleMap:
    """Apply ``perm`` exactly on coordinates whose given digit is 0.

    ``digit`` is 1-based; ``invert`` selects the inverse permutation.
    """
    if not 1 <= digit <= k:
        raise StructuralError(f"digit {digit} out of range 1..{k}")
    table = inverse(perm) if invert else perm
    mask = 1 << (digit - 1)

    def apply(point: CubePoint) -> CubePoint:
        return tuple(
            c if (e & mask) else table[c] for e, c in enumerate(point)
        )

    return apply


def push_forward(m: SparseCubeMeasure, f: TupleMap) -> SparseCubeMeasure:
    """Image measure: mass of a target point is the sum over its preimages."""
    entries: dict[CubePoint, Fraction] = {}
    for point, mass in m.entries.items():
        target = f(point)
        entries[target] = entries.get(target, Fraction(0)) + mass
    return SparseCubeMeasure(m.k, m.base_n, entries)


def marginal(m: SparseCubeMeasure, vertex) -> tuple[Fraction, ...]:
    """Distribution of the coordinate at ``vertex`` over the base points."""
    bits = vertex_bits(vertex, m.k)
    out = [Fraction(0)] * m.base_n
    for point, mass in m.entries.items():
        out[point[bits]] += mass
    return tuple(out)


def apply_digit_flip(m: SparseCubeMeasure, digit: int) -> SparseCubeMeasure:
    """Push-forward under the re-indexing that swaps digit values 0 and 1."""
    if not 1 <= digit <= m.k:
        raise StructuralError(f"digit {digit} out of range 1..{m.k}")
    mask = 1 << (digit - 1)

    def flip(point: CubePoint) -> CubePoint:
        return tuple(point[e ^ mask] for e in range(len(point)))

    return push_forward(m, flip)


def permute_order(order: Sequence[int], sigma: Sequence[int]) -> tuple[int, ...]:
    """Left action of ``sigma`` on the order: position sigma[i] holds order[i].

    This is the action under which the digit re-indexing of
    :func:`apply_index_permutation` maps one cube measure onto the other for
    every permutation, not just for transpositions.
    """
    order = tuple(order)
    sigma = tuple(int(s) for s in sigma)
    if not is_permutation(sigma, len(order)):
        raise StructuralError(f"{sigma} is not a permutation of the digit positions")
    out = [0] * len(order)
    for i, si in enumerate(sigma):
        out[si] = order[i]
    return tuple(out)


def apply_index_permutation(m: SparseCubeMeasure, sigma: Sequence[int]) -> SparseCubeMeasure:
    """Push-forward under the digit re-indexing induced by ``sigma``.

    ``sigma`` permutes digit positions (0-based): digit i of a vertex in
    the image is digit sigma[i] of the source vertex.  Mapping the cube
    measure built for one order through this re-indexing yields the cube
    measure built for the sigma-permuted order.
    """
    sigma = tuple(int(s) for s in sigma)
    if not is_permutation(sigma, m.k):
        raise StructuralError(f"{sigma} is not a permutation of the digit positions")
    width = m.width
    source_of = [0] * width
    for e in range(width):
        s = 0
        for i, si in enumerate(sigma):
            if (e >> si) & 1:
                s |= 1 << i
        source_of[e] = s

    def reindex(point: CubePoint) -> CubePoint:
        return tuple(point[source_of[e]] for e in range(width))

    return push_forward(m, reindex)


def integrate_product(m: SparseCubeMeasure, fs: Mapping) -> Fraction:
    """Integrate the product over vertices of per-vertex observables.

    ``fs`` maps vertices (Vertex or bitmask int) to observables on the base
    set; missing vertices contribute the constant 1.
    """
    fmap: dict[int, tuple[Fraction, ...]] = {}
    for key, obs in fs.items():
        bits = vertex_bits(key, m.k)
        values = obs.values if isinstance(obs, Observable) else tuple(obs)
        if len(values) != m.base_n:
            raise StructuralError(
                f"observable at vertex {bits} has {len(values)} values, expected {m.base_n}"
            )
        fmap[bits] = values
    items = sorted(fmap.items())
    total = Fraction(0)
    for point, mass in m.entries.items():
        term = mass
        for bits, values in items:
            term *= values[point[bits]]
        total += term
    return total
