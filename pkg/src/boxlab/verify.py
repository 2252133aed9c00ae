"""Property suite behind the ``verify`` command.

Each property evaluates a numbered batch of seeded draws (or an exhaustive
family, for the symmetry laws) and reports PASS, FAIL with a serialized
counterexample, or SKIP with the reason.  All draw data is generated up
front from the seed, so the outcome and its serialization are independent
of the thread count used for evaluation.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .averages import (
    characteristic_bound_check,
    multi_average_limit,
    uniformity_scan,
    van_der_corput_bound,
)
from .box_measure import (
    SUPPORT_CAP_DEFAULT,
    apply_digit_flip,
    apply_index_permutation,
    build_box_measure,
    diagonal_transform,
    marginal,
    permute_order,
    push_forward,
    side_transform,
)
from .draws import (
    random_bounded_observable,
    random_observable,
    random_unit_vectors,
    random_vertex_functions,
    random_zero_expectation_observable,
)
from .errors import SupportCapError
from .magic import (
    build_star_system,
    magic_check,
    normstar_check,
    span0_orthogonality_check,
    star_conditional_expectation,
    wstar_partition,
    zed_from_sharp,
)
from .parallel import ordered_map
from .perms import period
from .seminorm import (
    csg_check,
    seminorm_oracle_pow,
    seminorm_pow,
    seminorm_recursion_pow,
    zed_equivalence_check,
    zed_partition,
)
from .serialize import format_rational
from .system import FiniteSystem, Observable, transform_period, validate_system

STAR_VERIFY_BUDGET = 20_000


@dataclass
class PropertyOutcome:
    name: str
    status: str  # PASS | FAIL | SKIP
    detail: str
    counterexample: dict | None = None

    def as_dict(self) -> dict:
        out = {"property": self.name, "status": self.status, "detail": self.detail}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _obs_json(f: Observable) -> list[str]:
    return [format_rational(v) for v in f.values]


def _fs_json(fs: dict[int, Observable]) -> dict[str, list[str]]:
    return {str(bits): _obs_json(f) for bits, f in sorted(fs.items())}


@dataclass
class _Suite:
    sys: FiniteSystem
    order: tuple[int, ...]
    seed: int
    draws: int
    cap: int
    threads: int
    star_draws: int = field(init=False)

    def __post_init__(self):
        self.rng = random.Random(self.seed)
        self.d = len(self.order)
        self.star_draws = max(1, self.draws // 10)

    def run(self) -> list[PropertyOutcome]:
        checks = [
            self.check_system_valid,
            self.check_box_measure_laws,
            self.check_index_permutation,
            self.check_seminorm_routes,
            self.check_csg,
            self.check_lemma_z,
            self.check_uniform_full_period,
            self.check_characteristic_bound,
            self.check_van_der_corput,
            self.check_magic,
            self.check_span0,
            self.check_normstar,
        ]
        results = [checks[0]()]
        for check in checks[1:]:
            name = check.__name__.removeprefix("check_").replace("_", "-")
            if results[0].status == "FAIL":
                # nothing downstream is meaningful on an invalid system
                results.append(PropertyOutcome(name, "SKIP", "system invalid"))
                continue
            try:
                results.append(check())
            except SupportCapError as exc:
                results.append(PropertyOutcome(name, "SKIP", str(exc)))
        return results

    # -- individual properties -------------------------------------------

    def check_system_valid(self) -> PropertyOutcome:
        report = validate_system(self.sys)
        if report:
            return PropertyOutcome(
                "system-valid", "FAIL", "invariants violated", {"report": report}
            )
        return PropertyOutcome(
            "system-valid", "PASS", f"n={self.sys.n} d={self.sys.d}"
        )

    def check_box_measure_laws(self) -> PropertyOutcome:
        m = build_box_measure(self.sys, self.order, cap=self.cap, threads=self.threads)
        if m.total_mass() != 1:
            return PropertyOutcome("box-measure-laws", "FAIL", "total mass differs from 1")
        for bits in range(1 << self.d):
            if marginal(m, bits) != self.sys.weights:
                return PropertyOutcome(
                    "box-measure-laws", "FAIL", f"marginal at vertex {bits} differs",
                    {"vertex": bits},
                )
        for pos in range(1, self.d + 1):
            perm = self.sys.transforms[self.order[pos - 1]]
            for name, tmap in (
                ("side", side_transform(perm, self.d, pos)),
                ("side-inverse", side_transform(perm, self.d, pos, invert=True)),
            ):
                if push_forward(m, tmap) != m:
                    return PropertyOutcome(
                        "box-measure-laws", "FAIL",
                        f"not invariant under {name} transformation at digit {pos}",
                    )
            if apply_digit_flip(m, pos) != m:
                return PropertyOutcome(
                    "box-measure-laws", "FAIL", f"digit flip {pos} changes the measure"
                )
        for i in range(self.sys.d):
            if push_forward(m, diagonal_transform(self.sys.transforms[i], self.d)) != m:
                return PropertyOutcome(
                    "box-measure-laws", "FAIL",
                    f"not invariant under diagonal transformation {i}",
                )
        return PropertyOutcome(
            "box-measure-laws", "PASS",
            f"support={m.support_size()} marginals+symmetries exact",
        )

    def check_index_permutation(self) -> PropertyOutcome:
        m = build_box_measure(self.sys, self.order, cap=self.cap, threads=self.threads)
        sigmas = list(itertools.permutations(range(self.d)))
        if self.d > 3:
            sigmas = [tuple(self.rng.sample(range(self.d), self.d)) for _ in range(6)]
        f = random_observable(self.rng, self.sys.n)
        base_pow = seminorm_pow(self.sys, self.order, f, cap=self.cap).pow
        for sigma in sigmas:
            target = permute_order(self.order, sigma)
            if apply_index_permutation(m, sigma) != build_box_measure(
                self.sys, target, cap=self.cap
            ):
                return PropertyOutcome(
                    "index-permutation", "FAIL",
                    f"measure equality fails for digit permutation {sigma}",
                    {"sigma": list(sigma)},
                )
            if seminorm_pow(self.sys, target, f, cap=self.cap).pow != base_pow:
                return PropertyOutcome(
                    "index-permutation", "FAIL",
                    f"seminorm changes under order permutation {sigma}",
                    {"sigma": list(sigma), "f": _obs_json(f)},
                )
        return PropertyOutcome(
            "index-permutation", "PASS", f"{len(sigmas)} digit permutations exact"
        )

    def check_seminorm_routes(self) -> PropertyOutcome:
        fs = [random_observable(self.rng, self.sys.n) for _ in range(self.draws)]

        def one(f: Observable):
            a = seminorm_pow(self.sys, self.order, f, cap=self.cap).pow
            b = seminorm_oracle_pow(self.sys, self.order, f).pow
            c = a if self.d < 2 else seminorm_recursion_pow(self.sys, self.order, f, cap=self.cap).pow
            return a, b, c

        for i, (a, b, c) in enumerate(ordered_map(one, fs, self.threads)):
            if not (a == b == c):
                return PropertyOutcome(
                    "seminorm-routes", "FAIL",
                    "measure/oracle/recursion disagree",
                    {"draw": i, "f": _obs_json(fs[i]),
                     "measure": format_rational(a), "oracle": format_rational(b),
                     "recursion": format_rational(c)},
                )
        note = "" if self.d >= 2 else " (recursion skipped at d=1)"
        return PropertyOutcome(
            "seminorm-routes", "PASS", f"{len(fs)} draws agree exactly{note}"
        )

    def check_csg(self) -> PropertyOutcome:
        batches = [random_vertex_functions(self.rng, self.sys.n, self.d, False)
                   for _ in range(self.draws)]

        def one(fs):
            return csg_check(self.sys, self.order, fs, cap=self.cap)

        for i, res in enumerate(ordered_map(one, batches, self.threads)):
            if not res.holds:
                return PropertyOutcome(
                    "csg", "FAIL", "product bound violated",
                    {"draw": i, "fs": _fs_json(batches[i]),
                     "lhs_pow": format_rational(res.lhs_pow),
                     "rhs_pow": format_rational(res.rhs_pow)},
                )
        f = random_observable(self.rng, self.sys.n)
        eq = csg_check(self.sys, self.order, {b: f for b in range(1 << self.d)}, cap=self.cap)
        if eq.lhs_pow != eq.rhs_pow:
            return PropertyOutcome(
                "csg", "FAIL", "equality case fails for identical vertex functions",
                {"f": _obs_json(f)},
            )
        return PropertyOutcome("csg", "PASS", f"{len(batches)} draws + equality case")

    def check_lemma_z(self) -> PropertyOutcome:
        zed = zed_partition(self.sys, self.order, cap=self.cap)
        star = build_star_system(self.sys, self.order, cap=self.cap)
        if zed_from_sharp(star) != zed:
            return PropertyOutcome(
                "lemma-z", "FAIL", "component and invariant-set routes disagree"
            )
        fs = [random_observable(self.rng, self.sys.n) for _ in range(self.draws)]
        fs.extend(
            random_zero_expectation_observable(self.rng, self.sys, zed)
            for _ in range(max(1, self.draws // 4))
        )
        for i, f in enumerate(fs):
            if not zed_equivalence_check(self.sys, self.order, f, cap=self.cap):
                return PropertyOutcome(
                    "lemma-z", "FAIL", "seminorm-zero equivalence fails",
                    {"draw": i, "f": _obs_json(f)},
                )
        return PropertyOutcome(
            "lemma-z", "PASS", f"routes agree, equivalence on {len(fs)} draws"
        )

    def check_uniform_full_period(self) -> PropertyOutcome:
        length = math.lcm(
            *(transform_period(self.sys.transforms[i]) for i in self.order)
        )
        rounds = max(1, self.draws // 10)
        for i in range(rounds):
            fs = random_vertex_functions(self.rng, self.sys.n, self.d, True)
            starts = [self.rng.randint(-2 * length, 2 * length) for _ in range(3)]
            rep = uniformity_scan(self.sys, self.order, fs, length, starts, cap=self.cap)
            if not rep.pow_bound_holds:
                return PropertyOutcome(
                    "uniform-full-period", "FAIL",
                    "full-period average exceeds the origin seminorm",
                    {"draw": i, "fs": _fs_json(fs), "starts": starts,
                     "max_abs_J": format_rational(rep.max_abs_J),
                     "seminorm_pow": format_rational(rep.seminorm.pow)},
                )
        return PropertyOutcome(
            "uniform-full-period", "PASS",
            f"{rounds} scans at full period {length}",
        )

    def check_characteristic_bound(self) -> PropertyOutcome:
        if self.sys.d < 1:
            return PropertyOutcome("characteristic-bound", "SKIP", "no transforms")
        cases = []
        for _ in range(self.draws):
            f1 = random_observable(self.rng, self.sys.n)
            rest = [random_bounded_observable(self.rng, self.sys.n)
                    for _ in range(self.sys.d - 1)]
            cases.append([f1, *rest])

        def one(f_list):
            return characteristic_bound_check(self.sys, f_list, cap=self.cap)

        for i, res in enumerate(ordered_map(one, cases, self.threads)):
            if not res.holds:
                return PropertyOutcome(
                    "characteristic-bound", "FAIL", "limit norm exceeds the seminorm",
                    {"draw": i, "f_list": [_obs_json(f) for f in cases[i]]},
                )
        # zero seminorm of the first observable forces a zero limit
        from .averages import derived_transform_system

        tsys = derived_transform_system(self.sys)
        rev = tuple(reversed(range(self.sys.d)))
        zed = zed_partition(tsys, rev, cap=self.cap)
        for i in range(max(1, self.draws // 4)):
            f1 = random_zero_expectation_observable(self.rng, tsys, zed)
            rest = [random_bounded_observable(self.rng, self.sys.n)
                    for _ in range(self.sys.d - 1)]
            res = characteristic_bound_check(self.sys, [f1, *rest], cap=self.cap)
            limit = multi_average_limit(self.sys, [f1, *rest])
            if res.rhs.pow != 0 or limit.l2_norm_sq != 0:
                return PropertyOutcome(
                    "characteristic-bound", "FAIL",
                    "zero seminorm does not force a zero limit",
                    {"draw": i, "f1": _obs_json(f1)},
                )
        return PropertyOutcome(
            "characteristic-bound", "PASS", f"{len(cases)} draws + zero-seminorm form"
        )

    def check_van_der_corput(self) -> PropertyOutcome:
        for i in range(self.draws):
            N = self.rng.randint(2, 32)
            H = self.rng.randint(1, N)
            dim = self.rng.randint(1, 4)
            vecs = random_unit_vectors(self.rng, N, dim)
            res = van_der_corput_bound(vecs, H)
            if not res.holds:
                return PropertyOutcome(
                    "van-der-corput", "FAIL", "bound violated",
                    {"draw": i, "N": N, "H": H,
                     "lhs": format_rational(res.lhs), "rhs": format_rational(res.rhs)},
                )
        return PropertyOutcome("van-der-corput", "PASS", f"{self.draws} draws")

    # -- star-space properties (guarded by a size budget) ------------------

    def _star_or_skip(self, name: str):
        star = build_star_system(self.sys, self.order, cap=self.cap, threads=self.threads)
        estimate = star.size
        for t in star.star_transforms:
            estimate *= period(t)
        if estimate > STAR_VERIFY_BUDGET:
            return None, PropertyOutcome(
                name, "SKIP",
                f"estimated extension support {estimate} exceeds the verify budget "
                f"{STAR_VERIFY_BUDGET}",
            )
        return star, None

    def check_magic(self) -> PropertyOutcome:
        star, skip = self._star_or_skip("magic")
        if skip:
            return skip
        wstar = wstar_partition(star)
        for i in range(self.star_draws):
            G = random_observable(self.rng, star.size)
            F = G - star_conditional_expectation(star, G, wstar)
            res = magic_check(star, F, cap=self.cap)
            if not res.holds or res.star_pow != 0:
                return PropertyOutcome(
                    "magic", "FAIL", "zero expectation does not force zero seminorm",
                    {"draw": i, "G": _obs_json(G),
                     "star_pow": format_rational(res.star_pow)},
                )
        return PropertyOutcome(
            "magic", "PASS", f"{self.star_draws} draws on carrier of {star.size}"
        )

    def check_span0(self) -> PropertyOutcome:
        star = build_star_system(self.sys, self.order, cap=self.cap, threads=self.threads)
        zed = zed_partition(self.sys, self.order, cap=self.cap)
        for i in range(self.star_draws):
            fs = random_vertex_functions(self.rng, self.sys.n, self.d, True)
            fs[0] = random_zero_expectation_observable(self.rng, self.sys, zed)
            if not span0_orthogonality_check(star, fs):
                return PropertyOutcome(
                    "span0", "FAIL",
                    "vertex product has nonzero expectation on the off-origin algebra",
                    {"draw": i, "fs": _fs_json(fs)},
                )
        return PropertyOutcome("span0", "PASS", f"{self.star_draws} draws")

    def check_normstar(self) -> PropertyOutcome:
        star, skip = self._star_or_skip("normstar")
        if skip:
            return skip
        zed = zed_partition(self.sys, self.order, cap=self.cap)
        for i in range(self.star_draws):
            fs = random_vertex_functions(self.rng, self.sys.n, self.d, True)
            fs[0] = random_zero_expectation_observable(self.rng, self.sys, zed)
            if seminorm_pow(self.sys, self.order, fs[0], cap=self.cap).pow != 0:
                continue  # draw not admissible for this system
            if not normstar_check(star, fs, cap=self.cap):
                return PropertyOutcome(
                    "normstar", "FAIL",
                    "zero origin seminorm does not force zero extended seminorm",
                    {"draw": i, "fs": _fs_json(fs)},
                )
        return PropertyOutcome("normstar", "PASS", f"{self.star_draws} draws")


def run_suite(
    sys: FiniteSystem,
    order,
    seed: int = 0,
    draws: int = 200,
    cap: int = SUPPORT_CAP_DEFAULT,
    threads: int = 1,
) -> list[PropertyOutcome]:
    from .box_measure import normalize_order

    suite = _Suite(sys, normalize_order(sys, order), seed, draws, cap, threads)
    return suite.run()
