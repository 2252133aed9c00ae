#!/usr/bin/env python3
"""Tour of finite systems: weights, orbits, conditional expectations.

A system is a finite set with rational probability weights and commuting
weight-preserving permutations.  Everything below is exact arithmetic, so
printed identities hold with zero tolerance.
"""

from fractions import Fraction

from boxlab import (
    FiniteSystem,
    Observable,
    conditional_expectation,
    join_partitions,
    orbit_partition,
    transform_period,
    validate_system,
)

# Z/4 with the rotation x+1 and the half-rotation x+2.  The two maps
# commute and preserve the uniform weights.
quarter = Fraction(1, 4)
z4 = FiniteSystem(
    weights=(quarter, quarter, quarter, quarter),
    transforms=((1, 2, 3, 0), (2, 3, 0, 1)),
)
print("system:", z4)
print("validation report (empty means valid):", validate_system(z4))

# Orbits realize the invariant sets of each transform.
rot = z4.transforms[0]
half = z4.transforms[1]
print("orbits of x+1:", orbit_partition(rot).cells)
print("orbits of x+2:", orbit_partition(half).cells)
print("periods:", transform_period(rot), "and", transform_period(half))

# A deliberately broken system: the swap does not preserve these weights.
broken = FiniteSystem((Fraction(1, 3), Fraction(2, 3)), ((1, 0),))
print("broken system report:", validate_system(broken))

# Conditional expectation averages over partition cells.  On the partition
# into pairs {0,1} and {2,3} of the uniform 4-point space:
from boxlab import Partition

pairs = Partition.from_cells([[0, 1], [2, 3]], 4)
f = Observable((Fraction(1), Fraction(2), Fraction(3), Fraction(4)))
e = conditional_expectation(f, pairs, z4.weights)
print("E(f | pairs):", [str(v) for v in e.values])  # 3/2, 3/2, 7/2, 7/2

# Conditioning twice changes nothing, and the weighted L2 norm contracts.
again = conditional_expectation(e, pairs, z4.weights)
print("idempotent:", again.values == e.values)
print(
    "norm contracts:",
    e.l2_norm_sq(z4.weights),
    "<=",
    f.l2_norm_sq(z4.weights),
)

# Joining partitions refines them: cells are intersections of cells.
cols = Partition.from_cells([[0, 2], [1, 3]], 4)
print("join of pairs and columns:", join_partitions([pairs, cols]).cells)
