"""Multiple ergodic averages along intervals with exact limits.

On a finite system every orbit sequence is periodic, so the limit of an
interval average as the length grows is realized exactly as the average
over one full common period of the transformations.  Convergence therefore
becomes a pair of finitely checkable facts: intervals whose length is a
multiple of the period reproduce the limit exactly, and arbitrary intervals
differ from it by at most a boundary term of order 1/length.

The module also evaluates the multilinear interval averages that drive the
seminorm machinery, the characteristic seminorm bound for the limit of a
multiple average, and the finite van der Corput inequality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .box_measure import SUPPORT_CAP_DEFAULT, normalize_order
from .errors import PreconditionError, StructuralError
from .perms import Perm, compose, identity, inverse
from .seminorm import (
    SeminormValue,
    integrand_table,
    normalize_vertex_functions,
    seminorm_pow,
)
from .system import FiniteSystem, Observable, transform_period


@dataclass(frozen=True)
class Interval:
    """Integer interval [start, start + length); length must be positive."""

    start: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise StructuralError(f"interval length must be >= 1, got {self.length}")

    @property
    def stop(self) -> int:
        return self.start + self.length

    def __iter__(self):
        return iter(range(self.start, self.stop))


@dataclass(frozen=True)
class AverageResult:
    """An averaged observable together with its weighted squared L2 norm."""

    values: Observable
    interval: Interval
    l2_norm_sq: Fraction


def _average_result(sys: FiniteSystem, values: Observable, interval: Interval) -> AverageResult:
    return AverageResult(values, interval, values.l2_norm_sq(sys.weights))


def derive_T_from_S(sys: FiniteSystem) -> tuple[Perm, ...]:
    """Difference transforms: first one unchanged, the rest composed with the
    inverse of the first.  They commute and preserve the weights whenever
    the originals do."""
    if sys.d < 1:
        raise PreconditionError("the system carries no transformations")
    s1_inv = inverse(sys.transforms[0])
    out = [sys.transforms[0]]
    for t in sys.transforms[1:]:
        out.append(compose(t, s1_inv))
    return tuple(out)


def derived_transform_system(sys: FiniteSystem) -> FiniteSystem:
    return FiniteSystem(sys.weights, derive_T_from_S(sys), sys.labels)


def common_period(sys: FiniteSystem) -> int:
    """lcm of the transform periods; orbit products repeat with this period."""
    return math.lcm(*(transform_period(t) for t in sys.transforms)) if sys.d else 1


def _residue_counts(start: int, length: int, modulus: int) -> list[int]:
    """How many n in [start, start+length) fall in each residue class."""
    base, extra = divmod(length, modulus)
    return [base + (1 if (r - start) % modulus < extra else 0) for r in range(modulus)]


def _orbit_product_values(sys: FiniteSystem, f_list: Sequence[Observable]) -> list[Observable]:
    """For each residue r modulo the common period, the pointwise product
    of the observables composed with the r-th powers of their transforms."""
    L = common_period(sys)
    out = []
    current = [f for f in f_list]
    for _ in range(L):
        prod = current[0]
        for g in current[1:]:
            prod = prod * g
        out.append(prod)
        current = [g.translate(t) for g, t in zip(current, sys.transforms)]
    return out


def multi_average(
    sys: FiniteSystem, f_list: Sequence[Observable], interval: Interval
) -> AverageResult:
    """Average over the interval of the product of translated observables."""
    if len(f_list) != sys.d:
        raise StructuralError(f"{len(f_list)} observables for {sys.d} transforms")
    for f in f_list:
        if f.n != sys.n:
            raise StructuralError("observable size does not match the system")
    L = common_period(sys)
    counts = _residue_counts(interval.start, interval.length, L)
    products = _orbit_product_values(sys, f_list)
    total = [Fraction(0)] * sys.n
    for r, c in enumerate(counts):
        if c == 0:
            continue
        for x in range(sys.n):
            total[x] += c * products[r].values[x]
    values = Observable(tuple(v / interval.length for v in total))
    return _average_result(sys, values, interval)


def multi_average_limit(sys: FiniteSystem, f_list: Sequence[Observable]) -> AverageResult:
    """The exact limit of the interval averages: one full-period average.

    For every interval whose length is a multiple of the common period the
    plain average equals this limit exactly, at any start.
    """
    L = common_period(sys)
    return multi_average(sys, f_list, Interval(0, L))


@dataclass(frozen=True)
class CharacteristicBound:
    lhs: Fraction
    rhs: SeminormValue
    holds: bool


def characteristic_bound_check(
    sys: FiniteSystem,
    f_list: Sequence[Observable],
    cap: int = SUPPORT_CAP_DEFAULT,
) -> CharacteristicBound:
    """Squared L2 norm of the exact average limit against the box seminorm
    of the first observable for the reversed difference transforms.

    Compared in exact powers: (|limit|_2^2)^(2^(d-1)) <= seminorm power.
    Requires sup norm <= 1 for every observable after the first.
    """
    if len(f_list) != sys.d or sys.d < 1:
        raise StructuralError(f"{len(f_list)} observables for {sys.d} transforms")
    for i, f in enumerate(f_list[1:], start=2):
        if f.max_abs() > 1:
            raise PreconditionError(f"observable {i} has sup norm above 1")
    limit = multi_average_limit(sys, f_list)
    lhs = limit.l2_norm_sq
    tsys = derived_transform_system(sys)
    order = tuple(reversed(range(sys.d)))
    rhs = seminorm_pow(tsys, order, f_list[0], cap=cap)
    holds = lhs ** (1 << (sys.d - 1)) <= rhs.pow
    return CharacteristicBound(lhs, rhs, holds)


def multilinear_average_J(
    sys: FiniteSystem,
    order: Sequence[int],
    fs: Mapping,
    intervals: Sequence[Interval],
) -> Fraction:
    """Mean over the interval box of the shifted vertex-product integrals.

    Vertex eps receives transform i to the power n_i exactly when digit i
    of eps is 0; the n_i range over the given intervals.  Periodicity in
    each index reduces the mean to residue counts against one full-period
    table of integrand values.
    """
    order = normalize_order(sys, order)
    if len(intervals) != len(order):
        raise StructuralError(f"{len(intervals)} intervals for {len(order)} transforms")
    periods, table = integrand_table(sys, order, fs)
    counts = [
        _residue_counts(iv.start, iv.length, L) for iv, L in zip(intervals, periods)
    ]
    total = Fraction(0)
    for residues, value in table.items():
        weight = 1
        for i, r in enumerate(residues):
            weight *= counts[i][r]
        if weight:
            total += weight * value
    box = math.prod(iv.length for iv in intervals)
    return total / box


@dataclass(frozen=True)
class UniformityReport:
    max_abs_J: Fraction
    seminorm: SeminormValue
    margin: float
    pow_bound_holds: bool
    holds_with_delta: bool | None
    scanned: int


def uniformity_scan(
    sys: FiniteSystem,
    order: Sequence[int],
    fs: Mapping,
    length: int,
    starts: Sequence[int],
    delta: float | None = None,
    cap: int = SUPPORT_CAP_DEFAULT,
) -> UniformityReport:
    """Scan the multilinear average over all interval tuples of one length.

    Requires sup norm <= 1 at every vertex except the origin.  Reports the
    worst absolute average, the origin seminorm, the float margin between
    them, and the exact power comparison |J|^(2^d) <= seminorm power (which
    must hold whenever the length is a multiple of every period).
    """
    order = normalize_order(sys, order)
    d = len(order)
    fmap = normalize_vertex_functions(fs, sys, d)
    for bits in range(1, 1 << d):
        if fmap[bits].max_abs() > 1:
            raise PreconditionError(f"vertex {bits} observable has sup norm above 1")
    periods, table = integrand_table(sys, order, fmap)
    count_cache = {
        (s, L): _residue_counts(s, length, L)
        for s in starts
        for L in set(periods)
    }
    box = Fraction(length) ** d
    max_abs = Fraction(0)
    scanned = 0
    for combo in itertools.product(starts, repeat=d):
        total = Fraction(0)
        counts = [count_cache[(s, L)] for s, L in zip(combo, periods)]
        for residues, value in table.items():
            weight = 1
            for i, r in enumerate(residues):
                weight *= counts[i][r]
            if weight:
                total += weight * value
        scanned += 1
        max_abs = max(max_abs, abs(total / box))
    sem = seminorm_pow(sys, order, fmap[0], cap=cap)
    margin = float(max_abs) - sem.root()
    pow_bound_holds = max_abs ** (1 << d) <= sem.pow
    holds_with_delta = None if delta is None else (margin < delta)
    return UniformityReport(max_abs, sem, margin, pow_bound_holds, holds_with_delta, scanned)


@dataclass(frozen=True)
class VdcBound:
    lhs: Fraction
    rhs: Fraction
    holds: bool


def van_der_corput_bound(
    vectors: Sequence[Sequence[Fraction]],
    H: int,
    weights: Sequence[Fraction] | None = None,
) -> VdcBound:
    """Finite van der Corput inequality for vectors in a weighted space.

    lhs is the squared norm of the plain average; rhs adds the boundary
    term 4H/N to the absolute triangular-weighted sum of the shifted
    correlation averages, where pairs leaving the index range are dropped
    and the correlation average keeps denominator N.  Requires every vector
    norm at most 1 and 1 <= H <= N.
    """
    N = len(vectors)
    if N < 1:
        raise PreconditionError("need at least one vector")
    if not 1 <= H <= N:
        raise PreconditionError(f"H must satisfy 1 <= H <= {N}, got {H}")
    dim = len(vectors[0])
    if weights is None:
        weights = [Fraction(1)] * dim
    vecs = [tuple(Fraction(c) for c in v) for v in vectors]
    for v in vecs:
        if len(v) != dim:
            raise StructuralError("vectors have mixed dimensions")

    def ip(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return sum((w * a * b for w, a, b in zip(weights, u, v)), Fraction(0))

    for i, v in enumerate(vecs):
        if ip(v, v) > 1:
            raise PreconditionError(f"vector {i} has norm above 1")

    mean = tuple(sum((v[j] for v in vecs), Fraction(0)) / N for j in range(dim))
    lhs = ip(mean, mean)

    def correlation(h: int) -> Fraction:
        total = Fraction(0)
        for n in range(N):
            if 0 <= n + h < N:
                total += ip(vecs[n + h], vecs[n])
        return total / N

    corr = Fraction(0)
    for h in range(-H, H + 1):
        weight = Fraction(H - abs(h), H * H)
        if weight:
            corr += weight * correlation(h)
    rhs = Fraction(4 * H, N) + abs(corr)
    return VdcBound(lhs, rhs, lhs <= rhs)


def decomposable_reduction_check(
    sys: FiniteSystem,
    g_list: Sequence[Observable],
    f_list: Sequence[Observable],
    interval: Interval,
) -> bool:
    """Identity reducing a d-fold average to a (d-1)-fold one.

    When the first function is a product of factors g_i, each invariant
    under the i-th difference transform, the d-fold average equals the
    average for the remaining transforms applied to the products g_i * f_i,
    pointwise and for every interval.  g_list holds g_2..g_d and f_list
    holds f_2..f_d.
    """
    if sys.d < 2 or len(g_list) != sys.d - 1 or len(f_list) != sys.d - 1:
        raise StructuralError("need d-1 invariant factors and d-1 observables")
    ts = derive_T_from_S(sys)
    for i, g in enumerate(g_list, start=2):
        if g.translate(ts[i - 1]) != g:
            raise PreconditionError(
                f"factor {i} is not invariant under its difference transform"
            )
    f1 = g_list[0]
    for g in g_list[1:]:
        f1 = f1 * g
    lhs = multi_average(sys, [f1, *f_list], interval)
    sub = FiniteSystem(sys.weights, sys.transforms[1:], sys.labels)
    rhs = multi_average(sub, [g * f for g, f in zip(g_list, f_list)], interval)
    return lhs.values.values == rhs.values.values
