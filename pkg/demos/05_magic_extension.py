#!/usr/bin/env python3
"""The cube extension of a system and its magic property.

The support of the cube measure carries side transformations (the base
transform on half the coordinates) and diagonal transformations (the base
transform everywhere).  Projecting to the origin coordinate is a factor
map onto the base system.  The extension is magic: an observable whose
conditional expectation onto the joined side-orbit partition vanishes has
vanishing box seminorm up there.  That is what lets convergence questions
be lifted from the base system to the extension, where they split cleanly.
"""

import random
from fractions import Fraction

from boxlab import (
    FiniteSystem,
    Observable,
    build_star_system,
    derive_S_star,
    magic_check,
    normstar_check,
    span0_orthogonality_check,
    star_conditional_expectation,
    star_seminorm_pow,
    wstar_partition,
    zed_from_sharp,
    zed_partition,
)
from boxlab.draws import random_zero_expectation_observable

quarter = Fraction(1, 4)
z4 = FiniteSystem((quarter,) * 4, ((1, 2, 3, 0), (2, 3, 0, 1)))

star = build_star_system(z4, (0, 1))
print("extension:", star)
print("first carrier tuples:", star.carrier[:3])

# The origin projection intertwines the side transformations with the base
# transforms (checked at construction) and the lifted averaging maps of
# derive_S_star descend the same way.
lifted = derive_S_star(star)
print("lifted averaging transforms commute and preserve the weights:",
      all(star.weights[t[c]] == star.weights[c] for t in lifted for c in range(star.size)))

# The joined side-orbit partition on the carrier.  With two or more
# transforms it separates points on any finite system (each support tuple
# sits inside one abelian joint-orbit block, where a side power fixing one
# coordinate fixes them all), so the magic hypothesis can only be met by
# the zero observable and the property holds without drama.
wstar = wstar_partition(star)
print("joined side-orbit partition:", len(wstar.cells), "cells on", star.size, "tuples")
rng = random.Random(5)
G = Observable(tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(star.size)))
res = magic_check(star, G - star_conditional_expectation(star, G, wstar))
print("d=2 magic check:", res.expectation_is_zero, str(res.star_pow), res.holds)

# The one-transform case is where the projection is substantive: the
# partition is the side-transform orbit partition, typically coarse, and
# the extended seminorm of the projection must still collapse to zero
# through the full cube-measure pipeline.
blocks1 = FiniteSystem((quarter,) * 4, ((1, 0, 3, 2),))
star1 = build_star_system(blocks1, (0,))
w1 = wstar_partition(star1)
print("d=1 extension:", star1.size, "tuples,", len(w1.cells), "orbit cells")
G1 = Observable(tuple(Fraction(rng.randint(-3, 3), 2) for _ in range(star1.size)))
F1 = G1 - star_conditional_expectation(star1, G1, w1)
res1 = magic_check(star1, F1)
print("projection nonzero:", not F1.is_zero(),
      " extended seminorm power:", str(res1.star_pow),
      " magic holds:", res1.holds)

# For contrast, a partition-measurable observable keeps positive seminorm.
M = star_conditional_expectation(star1, G1, w1)
print("measurable observable has power:", str(star_seminorm_pow(star1, M).pow))

# Two routes to the same base partition: bipartite components of the
# support, and jointly invariant sets of the off-origin projection pulled
# back through the support.
print("partition route equivalence:", zed_from_sharp(star) == zed_partition(z4, (0, 1)))

# The lemmas feeding the magic property, on a system with a coarse
# component partition (two swap blocks, one transform).
blocks = FiniteSystem((quarter,) * 4, ((1, 0, 3, 2),))
bstar = build_star_system(blocks, (0,))
zed = zed_partition(blocks, (0,))
f0 = random_zero_expectation_observable(rng, blocks, zed)
fs = {0: f0, 1: Observable((Fraction(1),) * 4, sup_bound=Fraction(1))}
print("zero-expectation product is orthogonal to the off-origin algebra:",
      span0_orthogonality_check(bstar, fs))
print("zero origin seminorm forces zero extended seminorm:",
      normstar_check(bstar, fs))
