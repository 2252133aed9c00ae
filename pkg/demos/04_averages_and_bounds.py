#!/usr/bin/env python3
"""Multiple ergodic averages: exact limits, the characteristic bound, and
the finite van der Corput inequality.

On a finite system the average of S_1^n f_1 ... S_d^n f_d over an interval
converges as the interval grows, and the limit is reached exactly at any
multiple of the common period.  The limit's L2 norm is controlled by a box
seminorm of f_1 alone, whatever the other functions are (bounded by 1).
"""

import random
from fractions import Fraction

from boxlab import (
    FiniteSystem,
    Interval,
    Observable,
    characteristic_bound_check,
    common_period,
    derive_T_from_S,
    multi_average,
    multi_average_limit,
    van_der_corput_bound,
)

quarter = Fraction(1, 4)
z4 = FiniteSystem((quarter,) * 4, ((1, 2, 3, 0), (2, 3, 0, 1)))

# The sign pattern against its own double-speed translate averages to zero.
sign = Observable((Fraction(1), Fraction(-1), Fraction(1), Fraction(-1)))
out = multi_average(z4, [sign, sign], Interval(0, 4))
print("average over [0,4):", [str(v) for v in out.values.values])

# The limit is the full-period average; intervals of length m*L reproduce
# it exactly at any start.
limit = multi_average_limit(z4, [sign, sign])
L = common_period(z4)
print("common period:", L)
print("limit reached exactly at multiples:",
      all(multi_average(z4, [sign, sign], Interval(s, m * L)).values == limit.values
          for s in (-3, 0, 11) for m in (1, 2)))

# Ragged intervals converge at speed 1/length: the distance to the limit is
# at most 2 L (product of sup norms) / length, exactly comparable.
rng = random.Random(1)
f1 = Observable(tuple(Fraction(rng.randint(-3, 3), 2) for _ in range(4)))
f2 = Observable(tuple(Fraction(rng.randint(-2, 2), 2) for _ in range(4)), sup_bound=Fraction(1))
lim = multi_average_limit(z4, [f1, f2])
scale = 2 * L * f1.max_abs() * f2.max_abs()
worst = max(
    (multi_average(z4, [f1, f2], Interval(s, ln)).values - lim.values).l2_norm_sq(z4.weights)
    * Fraction(ln * ln)
    for s in range(-4, 5)
    for ln in range(1, 15)
)
print("worst |I|^2 * squared distance:", str(worst), "<=", str(scale * scale),
      "->", worst <= scale * scale)

# The characteristic bound: the limit's squared norm, raised to 2^(d-1), is
# at most the seminorm power of f_1 for the reversed difference transforms.
print("difference transforms:", derive_T_from_S(z4))
res = characteristic_bound_check(z4, [f1, f2])
print("characteristic bound:", str(res.lhs), "^2 <=", str(res.rhs.pow),
      "->", res.holds)

# The finite van der Corput inequality for vectors of norm at most 1.
vecs = [(Fraction(1),) if n % 3 else (Fraction(-1, 2),) for n in range(12)]
vdc = van_der_corput_bound(vecs, 4)
print("van der Corput:", str(vdc.lhs), "<=", str(vdc.rhs), "->", vdc.holds)
