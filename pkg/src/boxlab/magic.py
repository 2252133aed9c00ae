"""The cube extension of a system and its magic property.

The support of the cube measure, carrying the side transformations (one per
digit) and the diagonal transformations, is itself a finite system that
extends the base: projecting to the origin coordinate is measure-preserving
and intertwines each side transformation with its base transform.  The
extension is *magic*: any observable on it whose conditional expectation
onto the common refinement of the side-transformation orbit partitions
vanishes has vanishing box seminorm up there.  This module builds the
extension, the partitions involved, and executable checks for the magic
property and the two lemmas feeding it (orthogonality of zero-expectation
vertex products, and vanishing of the extended seminorm when the origin
factor has seminorm zero).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .box_measure import (
    SUPPORT_CAP_DEFAULT,
    CubePoint,
    SparseCubeMeasure,
    build_box_measure,
    diagonal_transform,
    integrate_product,
    normalize_order,
    side_transform,
    vertex_bits,
)
from .errors import InvariantViolationError, PreconditionError, StructuralError
from .perms import Perm, commute, compose, inverse
from .seminorm import SeminormValue, seminorm_pow, zed_partition
from .system import (
    FiniteSystem,
    Observable,
    Partition,
    conditional_expectation,
    group_orbit_partition,
    join_partitions,
    orbit_partition,
)


class StarSystem:
    """The cube-measure support as a finite system over the base.

    carrier         sorted support tuples of the cube measure
    weights         their masses
    star_transforms permutations of the carrier applying transform i on
                    coordinates whose digit i is 0
    diag_transforms permutations applying transform i on all coordinates

    All transformations permute the carrier, preserve the weights, and
    commute; the origin-coordinate projection is a factor map onto the
    base.  These facts are checked at construction.
    """

    def __init__(
        self,
        base: FiniteSystem,
        order: tuple[int, ...],
        carrier: tuple[CubePoint, ...],
        weights: tuple[Fraction, ...],
        star_transforms: tuple[Perm, ...],
        diag_transforms: tuple[Perm, ...],
    ):
        self.base = base
        self.order = order
        self.carrier = carrier
        self.weights = weights
        self.star_transforms = star_transforms
        self.diag_transforms = diag_transforms
        self.index = {t: i for i, t in enumerate(carrier)}
        self._box: SparseCubeMeasure | None = None

    @property
    def d(self) -> int:
        return len(self.order)

    @property
    def size(self) -> int:
        return len(self.carrier)

    def origin_of(self, i: int) -> int:
        """Base point at the origin coordinate of carrier tuple i."""
        return self.carrier[i][0]

    def as_finite_system(self, transforms: Sequence[Perm] | None = None) -> FiniteSystem:
        if transforms is None:
            transforms = self.star_transforms
        return FiniteSystem(self.weights, tuple(transforms))

    def box_measure(self, cap: int = SUPPORT_CAP_DEFAULT) -> SparseCubeMeasure:
        """Cube measure of the extension itself (cached after first build)."""
        if self._box is None:
            self._box = build_box_measure(
                self.as_finite_system(), tuple(range(self.d)), cap=cap
            )
        return self._box

    def __repr__(self) -> str:
        return f"StarSystem(base_n={self.base.n}, d={self.d}, carrier={self.size})"


def _carrier_permutation(star_carrier, index, tuple_map) -> Perm:
    out = []
    for t in star_carrier:
        image = tuple_map(t)
        pos = index.get(image)
        if pos is None:
            raise InvariantViolationError(
                f"transformation leaves the support: {t} -> {image}"
            )
        out.append(pos)
    return tuple(out)


def build_star_system(
    sys: FiniteSystem,
    order: Sequence[int],
    cap: int = SUPPORT_CAP_DEFAULT,
    threads: int = 1,
) -> StarSystem:
    """Materialize the extension on the support of the cube measure."""
    order = normalize_order(sys, order)
    d = len(order)
    m = build_box_measure(sys, order, cap=cap, threads=threads)
    carrier = tuple(sorted(m.entries))
    weights = tuple(m.entries[t] for t in carrier)
    index = {t: i for i, t in enumerate(carrier)}
    star, diag = [], []
    for pos in range(1, d + 1):
        perm = sys.transforms[order[pos - 1]]
        star.append(_carrier_permutation(carrier, index, side_transform(perm, d, pos)))
        diag.append(_carrier_permutation(carrier, index, diagonal_transform(perm, d)))
    out = StarSystem(sys, order, carrier, weights, tuple(star), tuple(diag))
    out._box = None
    _check_star_invariants(out)
    return out


def _check_star_invariants(star: StarSystem) -> None:
    if sum(star.weights, Fraction(0)) != 1:
        raise InvariantViolationError("carrier weights do not sum to 1")
    for kind, perms in (("side", star.star_transforms), ("diagonal", star.diag_transforms)):
        for i, p in enumerate(perms):
            for c in range(star.size):
                if star.weights[p[c]] != star.weights[c]:
                    raise InvariantViolationError(
                        f"{kind} transformation {i + 1} does not preserve the weights"
                    )
    for family in (star.star_transforms, star.diag_transforms):
        for i in range(len(family)):
            for j in range(i + 1, len(family)):
                if not commute(family[i], family[j]):
                    raise InvariantViolationError(
                        "extension transformations do not commute"
                    )
    for i, dg in enumerate(star.diag_transforms):
        for j, st in enumerate(star.star_transforms):
            if not commute(dg, st):
                raise InvariantViolationError(
                    f"diagonal {i + 1} and side {j + 1} transformations do not commute"
                )
    # factor map: origin projection pushes weights to the base and
    # intertwines each side transformation with its base transform
    pushed = [Fraction(0)] * star.base.n
    for c in range(star.size):
        pushed[star.origin_of(c)] += star.weights[c]
    if tuple(pushed) != star.base.weights:
        raise InvariantViolationError("origin projection does not push onto the base")
    for pos, st in enumerate(star.star_transforms):
        perm = star.base.transforms[star.order[pos]]
        for c in range(star.size):
            if star.origin_of(st[c]) != perm[star.origin_of(c)]:
                raise InvariantViolationError(
                    f"side transformation {pos + 1} does not project onto its base transform"
                )


def derive_S_star(star: StarSystem) -> tuple[Perm, ...]:
    """Lifted averaging transforms on the carrier.

    The first one is the first side transformation; each later one composes
    its side transformation with the first.  Under the origin projection
    these descend to the base transforms recovered by composing each
    difference transform with the first, so when the base family was built
    with :func:`boxlab.averages.derive_T_from_S` the lifts project exactly
    onto the original averaging transforms.
    """
    first = star.star_transforms[0]
    out = [first]
    for st in star.star_transforms[1:]:
        out.append(compose(st, first))
    return tuple(out)


def wstar_partition(star: StarSystem) -> Partition:
    """Common refinement of the orbit partitions of the side transformations."""
    return join_partitions([orbit_partition(t) for t in star.star_transforms])


class SharpSpace:
    """Projection of the carrier away from the origin coordinate.

    tuples      sorted distinct off-origin blocks
    weights     projected masses
    transforms  per digit: the permutation applying the base transform on
                coordinates whose digit is 1 (the origin coordinate drops
                out, so these act entirely within the projection)
    """

    def __init__(self, tuples, weights, transforms):
        self.tuples = tuples
        self.weights = weights
        self.transforms = transforms
        self.index = {t: i for i, t in enumerate(tuples)}

    @property
    def size(self) -> int:
        return len(self.tuples)


def sharp_space(star: StarSystem) -> SharpSpace:
    d = star.d
    masses: dict[CubePoint, Fraction] = {}
    for t, w in zip(star.carrier, star.weights):
        sharp = t[1:]
        masses[sharp] = masses.get(sharp, Fraction(0)) + w
    tuples = tuple(sorted(masses))
    index = {t: i for i, t in enumerate(tuples)}
    transforms = []
    for pos in range(1, d + 1):
        perm = star.base.transforms[star.order[pos - 1]]
        mask = 1 << (pos - 1)

        def act(sharp, perm=perm, mask=mask):
            # off-origin slot j holds the coordinate at vertex mask j+1
            return tuple(
                perm[c] if ((j + 1) & mask) else c for j, c in enumerate(sharp)
            )

        transforms.append(_carrier_permutation(tuples, index, act))
    return SharpSpace(tuples, tuple(masses[t] for t in tuples), tuple(transforms))


def sharp_invariant_partition(star: StarSystem) -> Partition:
    """Orbits of the group generated by the off-origin digit transforms.

    Cells are the jointly invariant subsets of the projected support, which
    is the algebra that pulls back to functions of the origin coordinate.
    """
    sharp = sharp_space(star)
    return group_orbit_partition(sharp.transforms, sharp.size)


def zed_from_sharp(star: StarSystem) -> Partition:
    """Pull the jointly invariant cells back to the base through the support.

    Each supported base point touches exactly one invariant cell of the
    projection; grouping by that cell reproduces the component partition of
    :func:`boxlab.seminorm.zed_partition`.  Zero-weight points become
    singletons.
    """
    sharp = sharp_space(star)
    part = group_orbit_partition(sharp.transforms, sharp.size)
    touched: dict[int, set[int]] = {}
    for t in star.carrier:
        cell = part.cell_of[sharp.index[t[1:]]]
        touched.setdefault(t[0], set()).add(cell)
    groups: dict[frozenset, list[int]] = {}
    for p, cells in touched.items():
        groups.setdefault(frozenset(cells), []).append(p)
    cells = list(groups.values())
    cells.extend([x] for x in range(star.base.n) if x not in touched)
    return Partition.from_cells(cells, star.base.n)


def star_conditional_expectation(
    star: StarSystem, F: Observable, p: Partition
) -> Observable:
    if F.n != star.size:
        raise StructuralError(f"observable has {F.n} values, carrier has {star.size}")
    return conditional_expectation(F, p, star.weights)


def star_seminorm_pow(
    star: StarSystem, F: Observable, cap: int = SUPPORT_CAP_DEFAULT
) -> SeminormValue:
    """Box seminorm power of a carrier observable, for the side transforms.

    Integrates against the cube measure of the extension viewed as a finite
    system; the measure is cached on the star, so repeated evaluations pay
    only for the integral.  Support caps guard the sparse growth.
    """
    if F.n != star.size:
        raise StructuralError(f"observable has {F.n} values, carrier has {star.size}")
    m = star.box_measure(cap=cap)
    value = integrate_product(m, {bits: F for bits in range(1 << star.d)})
    return SeminormValue(star.d, value, tuple(range(star.d)))


@dataclass(frozen=True)
class MagicCheck:
    expectation_is_zero: bool
    star_pow: Fraction
    holds: bool


def magic_check(
    star: StarSystem, F: Observable, cap: int = SUPPORT_CAP_DEFAULT
) -> MagicCheck:
    """The magic property: zero expectation onto the joined side-orbit
    partition forces zero extended seminorm.  Only the implication is
    tested; a measurable observable with zero seminorm is fine."""
    expectation = star_conditional_expectation(star, F, wstar_partition(star))
    expectation_is_zero = expectation.is_zero()
    star_pow = star_seminorm_pow(star, F, cap=cap).pow
    holds = (not expectation_is_zero) or (star_pow == 0)
    return MagicCheck(expectation_is_zero, star_pow, holds)


def vertex_product_observable(star: StarSystem, fs: Mapping) -> Observable:
    """The carrier observable multiplying one base observable per vertex."""
    d = star.d
    fmap: dict[int, Observable] = {}
    for key, obs in fs.items():
        bits = vertex_bits(key, d)
        if obs.n != star.base.n:
            raise StructuralError(
                f"observable at vertex {bits} has {obs.n} values, expected {star.base.n}"
            )
        fmap[bits] = obs
    values = []
    for t in star.carrier:
        term = Fraction(1)
        for bits, obs in fmap.items():
            term *= obs.values[t[bits]]
        values.append(term)
    return Observable(tuple(values))


def span0_orthogonality_check(star: StarSystem, fs: Mapping) -> bool:
    """Zero expectation of the origin factor onto the component partition
    forces the vertex product to have zero conditional expectation onto the
    partition of the carrier by the off-origin block.

    The precondition (vanishing expectation of the origin observable) is
    checked exactly and raises when violated.
    """
    d = star.d
    fmap = {vertex_bits(k, d): obs for k, obs in fs.items()}
    f_origin = fmap.get(0, Observable.constant(1, star.base.n))
    zed = zed_partition(star.base, star.order)
    if not conditional_expectation(f_origin, zed, star.base.weights).is_zero():
        raise PreconditionError(
            "origin observable has nonzero expectation onto the component partition"
        )
    F = vertex_product_observable(star, fs)
    blocks: dict[CubePoint, list[int]] = {}
    for i, t in enumerate(star.carrier):
        blocks.setdefault(t[1:], []).append(i)
    sharp_partition = Partition.from_cells(blocks.values(), star.size)
    return star_conditional_expectation(star, F, sharp_partition).is_zero()


def normstar_check(
    star: StarSystem, fs: Mapping, cap: int = SUPPORT_CAP_DEFAULT
) -> bool:
    """Zero box seminorm of the origin factor forces zero extended seminorm
    of the vertex product.  The precondition is checked exactly."""
    d = star.d
    fmap = {vertex_bits(k, d): obs for k, obs in fs.items()}
    f_origin = fmap.get(0, Observable.constant(1, star.base.n))
    if seminorm_pow(star.base, star.order, f_origin, cap=cap).pow != 0:
        raise PreconditionError("origin observable has nonzero box seminorm")
    F = vertex_product_observable(star, fs)
    return star_seminorm_pow(star, F, cap=cap).pow == 0
