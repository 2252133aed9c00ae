"""Finite measure-preserving systems with commuting transformations.

A system is a finite point set {0, ..., n-1} carrying rational probability
weights and a family of commuting weight-preserving permutations.  Every
weight and function value is an exact ``fractions.Fraction``, so identities
checked elsewhere in the package are exact rational comparisons rather than
float tolerances.

Because a weight-preserving permutation has constant weight along each of
its cycles, the invariant sets of a transformation are realized concretely
as its orbit partition, and conditional expectation onto a partition is the
cell-wise weighted average (zero on cells of weight zero).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvariantViolationError, StructuralError
from .perms import Perm, commute, cycles, is_permutation
from .perms import period as _perm_period


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, and strings like '3/4'; floats are rejected."""
    if isinstance(value, float):
        raise StructuralError(f"exact rational required, got float {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise StructuralError(f"cannot parse rational from {value!r}") from exc


@dataclass(frozen=True)
class FiniteSystem:
    """Point weights plus commuting measure-preserving permutations.

    Construction only normalizes types and checks array shapes; the
    measure-theoretic invariants (weights sum to one, preservation,
    commutation, bijectivity) are reported by :func:`validate_system` so
    that broken candidate systems can be inspected rather than rejected
    outright.
    """

    weights: tuple[Fraction, ...]
    transforms: tuple[Perm, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        weights = tuple(as_fraction(w) for w in self.weights)
        if not weights:
            raise StructuralError("a system needs at least one point")
        object.__setattr__(self, "weights", weights)
        n = len(weights)
        transforms = []
        for idx, t in enumerate(self.transforms):
            arr = tuple(int(v) for v in t)
            if len(arr) != n:
                raise StructuralError(
                    f"transform {idx} has length {len(arr)}, expected {n}"
                )
            if any(not 0 <= v < n for v in arr):
                raise StructuralError(f"transform {idx} maps outside 0..{n - 1}")
            transforms.append(arr)
        object.__setattr__(self, "transforms", tuple(transforms))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise StructuralError(f"{len(labels)} labels for {n} points")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def d(self) -> int:
        return len(self.transforms)

    def transform(self, index: int) -> Perm:
        return self.transforms[index]

    def support(self) -> tuple[int, ...]:
        """Points of strictly positive weight."""
        return tuple(x for x, w in enumerate(self.weights) if w > 0)

    def __repr__(self) -> str:
        return f"FiniteSystem(n={self.n}, d={self.d})"


def validate_system(sys: FiniteSystem) -> list[str]:
    """Report every violated system invariant; an empty list means valid."""
    report: list[str] = []
    n = sys.n
    for x, w in enumerate(sys.weights):
        if w < 0:
            report.append(f"weight {x} is negative ({w})")
    total = sum(sys.weights, Fraction(0))
    if total != 1:
        report.append(f"weights sum to {total}, expected 1")
    bijective = []
    for i, t in enumerate(sys.transforms):
        if is_permutation(t, n):
            bijective.append(i)
        else:
            report.append(f"transform {i} not a bijection")
    for i in bijective:
        t = sys.transforms[i]
        for x in range(n):
            if sys.weights[t[x]] != sys.weights[x]:
                report.append(
                    f"transform {i} breaks measure preservation at point {x}"
                )
                break
    for a in range(len(bijective)):
        for b in range(a + 1, len(bijective)):
            i, j = bijective[a], bijective[b]
            if not commute(sys.transforms[i], sys.transforms[j]):
                report.append(f"transforms {i} and {j} do not commute")
    return report


def require_valid(sys: FiniteSystem) -> FiniteSystem:
    report = validate_system(sys)
    if report:
        raise InvariantViolationError(
            "system violates invariants: " + "; ".join(report), report
        )
    return sys


def transform_period(t: Perm) -> int:
    """Least L with t^L = identity.

    On a finite system every orbit sequence is L-periodic, which is what
    turns iterated ergodic limits into exact full-period averages.
    """
    return _perm_period(t)


@dataclass(frozen=True)
class Partition:
    """Disjoint covering cells of {0, ..., n-1} with an inverse lookup.

    Cells are kept sorted (each cell ascending, cells ordered by smallest
    member) so equal partitions compare equal and serialize identically.
    """

    cells: tuple[tuple[int, ...], ...]
    cell_of: tuple[int, ...]

    @staticmethod
    def from_cells(cells: Iterable[Iterable[int]], n: int) -> "Partition":
        norm = sorted(tuple(sorted(set(c))) for c in cells if tuple(c))
        cell_of = [-1] * n
        for ci, cell in enumerate(norm):
            for x in cell:
                if not 0 <= x < n:
                    raise StructuralError(f"cell member {x} outside 0..{n - 1}")
                if cell_of[x] != -1:
                    raise StructuralError(f"point {x} appears in two cells")
                cell_of[x] = ci
        if any(c == -1 for c in cell_of):
            missing = [x for x, c in enumerate(cell_of) if c == -1]
            raise StructuralError(f"points not covered by any cell: {missing}")
        return Partition(tuple(norm), tuple(cell_of))

    @staticmethod
    def trivial(n: int) -> "Partition":
        return Partition.from_cells([range(n)], n)

    @staticmethod
    def singletons(n: int) -> "Partition":
        return Partition.from_cells([[x] for x in range(n)], n)

    @property
    def n(self) -> int:
        return len(self.cell_of)

    def __repr__(self) -> str:
        return f"Partition({len(self.cells)} cells on {self.n} points)"


def orbit_partition(t: Perm) -> Partition:
    """Partition into the cycles of ``t``: the invariant sets of ``t``.

    Zero-weight points stay in their orbit cells; almost-everywhere
    statements are insensitive to this choice and it keeps the operation
    total.
    """
    return Partition.from_cells(cycles(t), len(t))


def join_partitions(parts: Sequence[Partition]) -> Partition:
    """Common refinement: nonempty intersections of one cell from each input.

    Realizes the smallest set algebra containing each input algebra, e.g.
    the algebra generated by the invariant sets of several transformations.
    """
    parts = list(parts)
    if not parts:
        raise StructuralError("join_partitions needs at least one partition")
    n = parts[0].n
    for p in parts[1:]:
        if p.n != n:
            raise StructuralError("partitions are over different index sets")
    groups: dict[tuple[int, ...], list[int]] = {}
    for x in range(n):
        key = tuple(p.cell_of[x] for p in parts)
        groups.setdefault(key, []).append(x)
    return Partition.from_cells(groups.values(), n)


def group_orbit_partition(perms: Sequence[Perm], n: int) -> Partition:
    """Partition into orbits of the group generated by ``perms``.

    Cells are the jointly invariant sets: union-find over every edge
    x -> p(x).  Coarser than each individual orbit partition.
    """
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        if len(p) != n:
            raise StructuralError("permutation length does not match point count")
        for x in range(n):
            rx, ry = find(x), find(p[x])
            if rx != ry:
                parent[ry] = rx
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return Partition.from_cells(groups.values(), n)


@dataclass(frozen=True)
class Observable:
    """Rational-valued function on the point set, with optional sup bound."""

    values: tuple[Fraction, ...]
    sup_bound: Fraction | None = None

    def __post_init__(self):
        values = tuple(as_fraction(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if self.sup_bound is not None:
            bound = as_fraction(self.sup_bound)
            object.__setattr__(self, "sup_bound", bound)
            bad = [x for x, v in enumerate(values) if abs(v) > bound]
            if bad:
                raise InvariantViolationError(
                    f"values exceed the declared sup bound {bound} at {bad}"
                )

    @staticmethod
    def constant(c, n: int) -> "Observable":
        c = as_fraction(c)
        return Observable((c,) * n, sup_bound=abs(c))

    @staticmethod
    def zero(n: int) -> "Observable":
        return Observable.constant(0, n)

    @property
    def n(self) -> int:
        return len(self.values)

    def translate(self, t: Perm) -> "Observable":
        """Composition with ``t``: x -> values[t(x)]."""
        return Observable(tuple(self.values[t[x]] for x in range(self.n)), self.sup_bound)

    def __mul__(self, other: "Observable") -> "Observable":
        if self.n != other.n:
            raise StructuralError("observables live on different point sets")
        bound = None
        if self.sup_bound is not None and other.sup_bound is not None:
            bound = self.sup_bound * other.sup_bound
        return Observable(
            tuple(a * b for a, b in zip(self.values, other.values)), bound
        )

    def __add__(self, other: "Observable") -> "Observable":
        if self.n != other.n:
            raise StructuralError("observables live on different point sets")
        return Observable(tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Observable") -> "Observable":
        if self.n != other.n:
            raise StructuralError("observables live on different point sets")
        return Observable(tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "Observable":
        c = as_fraction(c)
        return Observable(tuple(c * v for v in self.values))

    def max_abs(self) -> Fraction:
        return max((abs(v) for v in self.values), default=Fraction(0))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def integral(self, weights: Sequence[Fraction]) -> Fraction:
        return sum((w * v for w, v in zip(weights, self.values)), Fraction(0))

    def l2_norm_sq(self, weights: Sequence[Fraction]) -> Fraction:
        return sum((w * v * v for w, v in zip(weights, self.values)), Fraction(0))


def conditional_expectation(
    f: Observable, partition: Partition, weights: Sequence[Fraction]
) -> Observable:
    """Cell-wise weighted average of ``f``; zero on cells of weight zero.

    The result is measurable with respect to the partition and satisfies
    the defining adjunction sum(w * out * g) = sum(w * f * g) for every
    partition-measurable g.
    """
    if f.n != partition.n or len(weights) != partition.n:
        raise StructuralError("observable, partition, and weights sizes differ")
    out = [Fraction(0)] * partition.n
    for cell in partition.cells:
        cw = sum((weights[x] for x in cell), Fraction(0))
        if cw == 0:
            continue
        avg = sum((weights[x] * f.values[x] for x in cell), Fraction(0)) / cw
        for x in cell:
            out[x] = avg
    return Observable(tuple(out))
