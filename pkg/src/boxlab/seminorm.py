"""Box seminorms by independent routes, with the related exact checks.

The seminorm of an observable f for a sequence of d commuting transforms is
the 2^d-th root of the integral of f placed on every cube vertex against
the cube measure.  This module stores and compares seminorms through that
2^d-th power, which is a non-negative exact rational, so every inequality
here except the explicitly toleranced triangle check is decided exactly.

Three routes compute the same power:

* ``seminorm_pow``       builds the sparse cube measure and integrates;
* ``seminorm_oracle_pow`` evaluates the iterated-average formula as a finite
  multi-sum over full periods (each summand is periodic in each index, so
  the full-period average equals the limit);
* ``seminorm_recursion_pow`` averages the (d-1)-transform power of the
  shifted products over one full period of the last transform.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .box_measure import (
    SUPPORT_CAP_DEFAULT,
    SparseCubeMeasure,
    build_box_measure,
    integrate_product,
    normalize_order,
    vertex_bits,
)
from .errors import PreconditionError, StructuralError
from .perms import compose, identity
from .system import (
    FiniteSystem,
    Observable,
    Partition,
    conditional_expectation,
    transform_period,
)


@dataclass(frozen=True)
class SeminormValue:
    """The 2^d-th power of a box seminorm, with the order that produced it."""

    d: int
    pow: Fraction
    order: tuple[int, ...]

    def root(self) -> float:
        """Float approximation of the seminorm itself (d nested square roots)."""
        r = float(self.pow)
        for _ in range(self.d):
            r = math.sqrt(r)
        return r

    def __repr__(self) -> str:
        return f"SeminormValue(pow={self.pow}, d={self.d})"


def _full_vertex_map(f: Observable, d: int) -> dict[int, Observable]:
    return {bits: f for bits in range(1 << d)}


def normalize_vertex_functions(
    fs: Mapping, sys: FiniteSystem, d: int
) -> dict[int, Observable]:
    """Resolve Vertex/int keys to bitmasks and fill gaps with the constant 1."""
    out: dict[int, Observable] = {}
    for key, obs in fs.items():
        bits = vertex_bits(key, d)
        if obs.n != sys.n:
            raise StructuralError(
                f"observable at vertex {bits} has {obs.n} values, expected {sys.n}"
            )
        out[bits] = obs
    one = Observable.constant(1, sys.n)
    for bits in range(1 << d):
        out.setdefault(bits, one)
    return out


def seminorm_pow(
    sys: FiniteSystem,
    order: Sequence[int],
    f: Observable,
    cap: int = SUPPORT_CAP_DEFAULT,
    threads: int = 1,
) -> SeminormValue:
    """Cube-measure route: integrate f at every vertex against the cube measure."""
    order = normalize_order(sys, order)
    m = build_box_measure(sys, order, cap=cap, threads=threads)
    value = integrate_product(m, _full_vertex_map(f, len(order)))
    return SeminormValue(len(order), value, order)


def transform_power_tables(sys: FiniteSystem, order: Sequence[int]):
    """Per order position: the list of permutation powers over one full period."""
    tables = []
    for idx in order:
        t = sys.transforms[idx]
        powers = [identity(sys.n)]
        for _ in range(transform_period(t) - 1):
            powers.append(compose(t, powers[-1]))
        tables.append(powers)
    return tables


def translated_product_integral(
    sys: FiniteSystem,
    fmap: dict[int, Observable],
    power_tables,
    exponents: Sequence[int],
) -> Fraction:
    """Integral of the product over vertices of shifted vertex functions.

    Vertex eps picks up the translate by transform i to the power
    exponents[i] exactly when digit i of eps is 0 (1-based digits).
    """
    d = len(power_tables)
    factors = []
    for bits in sorted(fmap):
        comp = None
        for i in range(d):
            if not (bits >> i) & 1:
                table = power_tables[i]
                p = table[exponents[i] % len(table)]
                comp = p if comp is None else compose(p, comp)
        factors.append((comp, fmap[bits].values))
    total = Fraction(0)
    for x, w in enumerate(sys.weights):
        if w == 0:
            continue
        term = w
        for comp, values in factors:
            term *= values[x if comp is None else comp[x]]
        total += term
    return total


def integrand_table(
    sys: FiniteSystem, order: Sequence[int], fs: Mapping
) -> tuple[tuple[int, ...], dict[tuple[int, ...], Fraction]]:
    """All values of the shifted-product integral over one full period box.

    Returns the per-position periods and the map from exponent residues to
    integral values.  Every interval average of the integrand reduces to a
    weighted combination of this table because each exponent is periodic.
    """
    order = normalize_order(sys, order)
    fmap = normalize_vertex_functions(fs, sys, len(order))
    tables = transform_power_tables(sys, order)
    periods = tuple(len(t) for t in tables)
    out: dict[tuple[int, ...], Fraction] = {}
    for residues in itertools.product(*(range(p) for p in periods)):
        out[residues] = translated_product_integral(sys, fmap, tables, residues)
    return periods, out


def seminorm_oracle_pow(
    sys: FiniteSystem, order: Sequence[int], f: Observable
) -> SeminormValue:
    """Iterated-average route, independent of the cube-measure code paths.

    The nested limits of averages collapse to one finite mean over the full
    period box, because on a finite system the integrand is periodic in
    every index separately.
    """
    order = normalize_order(sys, order)
    periods, table = integrand_table(sys, order, _full_vertex_map(f, len(order)))
    total = sum(table.values(), Fraction(0))
    return SeminormValue(len(order), total / math.prod(periods), order)


def seminorm_recursion_pow(
    sys: FiniteSystem,
    order: Sequence[int],
    f: Observable,
    cap: int = SUPPORT_CAP_DEFAULT,
) -> SeminormValue:
    """Recursion route: full-period mean of the (d-1)-transform powers of
    the shifted products along the last transform.

    The mean over one period carries the 1/N normalization of the limit it
    realizes; without it the average would diverge.  Requires d >= 2.
    """
    order = normalize_order(sys, order)
    if len(order) < 2:
        raise PreconditionError("the recursion needs at least two transforms")
    last = sys.transforms[order[-1]]
    sub_order = order[:-1]
    total = Fraction(0)
    shifted = f
    for _ in range(transform_period(last)):
        total += seminorm_pow(sys, sub_order, shifted * f, cap=cap).pow
        shifted = shifted.translate(last)
    return SeminormValue(len(order), total / transform_period(last), order)


@dataclass(frozen=True)
class CsgResult:
    lhs_pow: Fraction
    rhs_pow: Fraction
    holds: bool


def csg_check(
    sys: FiniteSystem,
    order: Sequence[int],
    fs: Mapping,
    cap: int = SUPPORT_CAP_DEFAULT,
) -> CsgResult:
    """Cube-integral bound: |integral of the vertex product| is at most the
    product of the per-vertex seminorms, compared through 2^d-th powers.
    """
    order = normalize_order(sys, order)
    d = len(order)
    fmap = normalize_vertex_functions(fs, sys, d)
    m = build_box_measure(sys, order, cap=cap)
    lhs = integrate_product(m, fmap)
    lhs_pow = abs(lhs) ** (1 << d)
    rhs_pow = Fraction(1)
    for bits in range(1 << d):
        rhs_pow *= integrate_product(m, _full_vertex_map(fmap[bits], d))
    return CsgResult(lhs_pow, rhs_pow, lhs_pow <= rhs_pow)


def triangle_check(
    sys: FiniteSystem,
    order: Sequence[int],
    f: Observable,
    g: Observable,
    tol: float = 1e-9,
) -> bool:
    """Subadditivity of the seminorm, checked in floating point.

    The only non-exact comparison in the package: 2^d-th roots of exact
    rationals are irrational in general, so the sum is compared with a
    tolerance (default 1e-9, generous at desk scale).
    """
    a = seminorm_pow(sys, order, f + g).root()
    b = seminorm_pow(sys, order, f).root()
    c = seminorm_pow(sys, order, g).root()
    return a <= b + c + tol


def zed_partition(
    sys: FiniteSystem, order: Sequence[int], cap: int = SUPPORT_CAP_DEFAULT
) -> Partition:
    """Cells supporting functions of the origin coordinate that agree,
    cube-measure almost everywhere, with functions of the other coordinates.

    Computed as the connected components of the bipartite incidence between
    origin values and off-origin value tuples on the support of the cube
    measure.  A set is a union of these cells exactly when its indicator at
    the origin coordinate matches some indicator of the off-origin block on
    the whole support.  Zero-weight points become singleton cells.
    """
    order = normalize_order(sys, order)
    m = build_box_measure(sys, order, cap=cap)
    parent = list(range(sys.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rep_for_sharp: dict[tuple[int, ...], int] = {}
    for point in m.entries:
        p, sharp = point[0], point[1:]
        if sharp in rep_for_sharp:
            rx, ry = find(p), find(rep_for_sharp[sharp])
            if rx != ry:
                parent[ry] = rx
        else:
            rep_for_sharp[sharp] = p
    supported = set(sys.support())
    groups: dict[int, list[int]] = {}
    for x in supported:
        groups.setdefault(find(x), []).append(x)
    cells = list(groups.values())
    cells.extend([x] for x in range(sys.n) if x not in supported)
    return Partition.from_cells(cells, sys.n)


def zed_equivalence_check(
    sys: FiniteSystem,
    order: Sequence[int],
    f: Observable,
    cap: int = SUPPORT_CAP_DEFAULT,
) -> bool:
    """Whether vanishing seminorm and vanishing expectation onto the
    component partition agree for ``f`` (both sides exact)."""
    pow_zero = seminorm_pow(sys, order, f, cap=cap).pow == 0
    expectation = conditional_expectation(f, zed_partition(sys, order, cap=cap), sys.weights)
    return pow_zero == expectation.is_zero()


def gowers_norm_pow(N: int, d: int, f: Observable) -> Fraction:
    """The 2^d-th power of the Gowers uniformity norm on Z/N, by direct sum.

    Averages the product of f over the combinatorial cube x + eps . h over
    all x and h in (Z/N)^d.  Serves as the independent oracle for the
    cyclic specialization of the box seminorm.
    """
    if N < 1 or d < 1:
        raise PreconditionError("gowers_norm_pow needs N >= 1 and d >= 1")
    if f.n != N:
        raise StructuralError(f"observable has {f.n} values, expected {N}")
    values = f.values
    total = Fraction(0)
    for x in range(N):
        for hs in itertools.product(range(N), repeat=d):
            term = values[x]
            for bits in range(1, 1 << d):
                y = x
                for i in range(d):
                    if (bits >> i) & 1:
                        y += hs[i]
                term *= values[y % N]
            total += term
    return total / Fraction(N) ** (d + 1)
