"""Seeded random inputs for property suites.

Random systems are built from translations on disjoint abelian blocks
(cyclic groups, plus the 2x2 Klein group for size-4 blocks), which is the
general shape of finitely many commuting permutations up to orbit
decomposition.  Weights are drawn constant on the joint orbits, which makes
them automatically preserved by every transform; an occasional orbit gets
weight zero to exercise the null-set conventions.  With at most 6 points
the weight denominators never exceed 12.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .perms import Perm
from .system import FiniteSystem, Observable, conditional_expectation, group_orbit_partition


def rational_in_unit(rng: random.Random, max_den: int = 6) -> Fraction:
    """A rational in [-1, 1] with a small denominator."""
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-den, den), den)


def random_observable(
    rng: random.Random, n: int, max_num: int = 3, max_den: int = 4
) -> Observable:
    return Observable(
        tuple(Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den)) for _ in range(n))
    )


def random_bounded_observable(rng: random.Random, n: int, max_den: int = 4) -> Observable:
    """Values in [-1, 1], declared via sup_bound."""
    return Observable(
        tuple(rational_in_unit(rng, max_den) for _ in range(n)), sup_bound=Fraction(1)
    )


def _block_transforms(rng: random.Random, size: int, d: int) -> list[list[int]]:
    """Per transform, the image list of one abelian block of the given size."""
    klein = size == 4 and rng.random() < 0.5
    out = []
    for _ in range(d):
        if klein:
            shift = rng.randrange(4)
            out.append([x ^ shift for x in range(4)])
        else:
            shift = rng.randrange(size)
            out.append([(x + shift) % size for x in range(size)])
    return out


def random_commuting_system(
    rng: random.Random,
    max_n: int = 6,
    max_d: int = 3,
    n: int | None = None,
    d: int | None = None,
    allow_zero_weights: bool = True,
) -> FiniteSystem:
    if n is None:
        n = rng.randint(2, max_n)
    if d is None:
        d = rng.randint(1, max_d)
    sizes = []
    remaining = n
    while remaining:
        s = rng.randint(1, remaining)
        sizes.append(s)
        remaining -= s
    transforms = [[0] * n for _ in range(d)]
    start = 0
    for size in sizes:
        block = _block_transforms(rng, size, d)
        for i in range(d):
            for x in range(size):
                transforms[i][start + x] = start + block[i][x]
        start += size
    perms = tuple(tuple(t) for t in transforms)
    orbits = group_orbit_partition(perms, n)
    units = [rng.randint(1, 2) for _ in orbits.cells]
    if allow_zero_weights and len(orbits.cells) > 1 and rng.random() < 0.2:
        units[rng.randrange(len(units))] = 0
    total = sum(u * len(c) for u, c in zip(units, orbits.cells))
    if total == 0:
        units[0] = 1
        total = len(orbits.cells[0])
    weights = [Fraction(0)] * n
    for u, cell in zip(units, orbits.cells):
        for x in cell:
            weights[x] = Fraction(u, total)
    return FiniteSystem(tuple(weights), perms)


def random_vertex_functions(
    rng: random.Random, n: int, d: int, bounded_except_origin: bool = True
) -> dict[int, Observable]:
    """One observable per cube vertex; off-origin ones bounded by 1."""
    out: dict[int, Observable] = {0: random_observable(rng, n)}
    for bits in range(1, 1 << d):
        out[bits] = (
            random_bounded_observable(rng, n)
            if bounded_except_origin
            else random_observable(rng, n)
        )
    return out


def random_zero_expectation_observable(
    rng: random.Random, sys: FiniteSystem, partition
) -> Observable:
    """A random observable projected to have zero expectation on the partition."""
    g = random_observable(rng, sys.n)
    return g - conditional_expectation(g, partition, sys.weights)


def random_unit_vectors(
    rng: random.Random, count: int, dim: int, weights=None
) -> list[tuple[Fraction, ...]]:
    """Vectors of weighted norm at most 1 (halved until they fit)."""
    if weights is None:
        weights = [Fraction(1)] * dim
    out = []
    for _ in range(count):
        v = [Fraction(rng.randint(-2, 2), rng.randint(1, 3)) for _ in range(dim)]
        while sum((w * c * c for w, c in zip(weights, v)), Fraction(0)) > 1:
            v = [c / 2 for c in v]
        out.append(tuple(v))
    return out
