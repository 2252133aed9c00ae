"""Command-line surface.

Commands: validate, box-measure, seminorm, gowers, average, magic-check,
verify.  Exit codes: 0 success, 1 invariant violation, 2 parse or
structural error, 3 support cap exceeded, 4 internal consistency failure
(independent computation routes disagree), 5 failing verification property.

All output is canonical: entries sorted, JSON keys sorted, seeds echoed.
Identical configuration (including --seed and --threads) yields
byte-identical output; --threads only changes how work is scheduled.
The support cap defaults to 10^7 entries and can be overridden by --cap
or the BOXLAB_CAP environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import random
import sys as _sys
from dataclasses import dataclass
from fractions import Fraction

from .averages import Interval, multi_average, multi_average_limit
from .box_measure import SUPPORT_CAP_DEFAULT, build_box_measure
from .draws import random_observable
from .errors import (
    BoxlabError,
    InvariantViolationError,
    PreconditionError,
    StructuralError,
    SupportCapError,
)
from .magic import (
    build_star_system,
    magic_check,
    star_conditional_expectation,
    wstar_partition,
)
from .seminorm import (
    gowers_norm_pow,
    seminorm_oracle_pow,
    seminorm_pow,
    seminorm_recursion_pow,
)
from .serialize import (
    approx_root_str,
    dumps,
    format_rational,
    load_observable,
    load_system,
    measure_to_dict,
    observable_to_dict,
    seminorm_to_dict,
)
from .system import FiniteSystem, Observable, validate_system
from .verify import run_suite

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_INCONSISTENT = 4
EXIT_PROPERTY = 5


@dataclass
class RunConfig:
    command: str
    paths: list[str]
    order: tuple[int, ...] | None
    cap: int
    fmt: str
    seed: int
    draws: int
    threads: int


def _default_cap() -> int:
    env = os.environ.get("BOXLAB_CAP")
    if env is None:
        return SUPPORT_CAP_DEFAULT
    try:
        cap = int(env)
    except ValueError as exc:
        raise StructuralError(f"BOXLAB_CAP must be an integer, got {env!r}") from exc
    if cap <= 0:
        raise StructuralError(f"BOXLAB_CAP must be positive, got {cap}")
    return cap


def _parse_order(text: str | None, sys_d: int) -> tuple[int, ...]:
    if text is None:
        return tuple(range(sys_d))
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise StructuralError(f"--order must be comma-separated ints, got {text!r}") from exc


def _parse_interval(text: str) -> Interval:
    try:
        start_s, len_s = text.split(":")
        return Interval(int(start_s), int(len_s))
    except (ValueError, StructuralError) as exc:
        raise StructuralError(
            f"--interval must look like start:length, got {text!r}"
        ) from exc


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        paths=[p for p in getattr(args, "paths", [])],
        order=getattr(args, "order", None),
        cap=args.cap if args.cap is not None else _default_cap(),
        fmt=getattr(args, "format", "json"),
        seed=getattr(args, "seed", 0),
        draws=getattr(args, "draws", 200),
        threads=getattr(args, "threads", 1),
    )


def _require_valid_for_cli(system: FiniteSystem) -> None:
    report = validate_system(system)
    if report:
        raise InvariantViolationError("invalid system", report)


def cmd_validate(args) -> int:
    system = load_system(args.system)
    report = validate_system(system)
    print(dumps({"valid": not report, "violations": report}))
    return EXIT_OK if not report else EXIT_INVARIANT


def cmd_box_measure(args) -> int:
    cfg = _config(args)
    system = load_system(args.system)
    _require_valid_for_cli(system)
    order = _parse_order(args.order, system.d)
    m = build_box_measure(system, order, cap=cfg.cap, threads=cfg.threads)
    print(dumps(measure_to_dict(m)))
    return EXIT_OK


def cmd_seminorm(args) -> int:
    cfg = _config(args)
    system = load_system(args.system)
    _require_valid_for_cli(system)
    order = _parse_order(args.order, system.d)
    f = load_observable(args.observable, system.n)
    methods = {
        "measure": lambda: seminorm_pow(system, order, f, cap=cfg.cap),
        "oracle": lambda: seminorm_oracle_pow(system, order, f),
        "recursion": lambda: seminorm_recursion_pow(system, order, f, cap=cfg.cap),
    }
    if args.method == "all":
        wanted = ["measure", "oracle"] + (["recursion"] if len(order) >= 2 else [])
        results = {name: methods[name]() for name in wanted}
        pows = {name: r.pow for name, r in results.items()}
        payload = {name: seminorm_to_dict(r) for name, r in results.items()}
        if len(set(pows.values())) != 1:
            print(dumps({"error": "methods disagree", "results": payload}))
            return EXIT_INCONSISTENT
        print(dumps({"agree": True, "results": payload}))
        return EXIT_OK
    value = methods[args.method]()
    print(dumps(seminorm_to_dict(value)))
    return EXIT_OK


def cmd_gowers(args) -> int:
    cfg = _config(args)
    f = load_observable(args.observable, args.N)
    value = gowers_norm_pow(args.N, args.d, f)
    payload = {
        "N": args.N,
        "d": args.d,
        "pow": format_rational(value),
        "root_approx": approx_root_str(value, args.d),
    }
    if args.cross_check:
        shift = tuple((x + 1) % args.N for x in range(args.N))
        system = FiniteSystem(
            tuple(Fraction(1, args.N) for _ in range(args.N)), (shift,) * args.d
        )
        box = seminorm_pow(system, tuple(range(args.d)), f, cap=cfg.cap)
        payload["box_pow"] = format_rational(box.pow)
        payload["cross_check"] = box.pow == value
        print(dumps(payload))
        return EXIT_OK if box.pow == value else EXIT_INCONSISTENT
    print(dumps(payload))
    return EXIT_OK


def _average_payload(result) -> dict:
    return {
        "interval": {"start": result.interval.start, "length": result.interval.length},
        "values": [format_rational(v) for v in result.values.values],
        "l2_norm_sq": format_rational(result.l2_norm_sq),
    }


def cmd_average(args) -> int:
    cfg = _config(args)
    system = load_system(args.system)
    _require_valid_for_cli(system)
    if len(args.observables) != system.d:
        raise StructuralError(
            f"need {system.d} observable files, got {len(args.observables)}"
        )
    f_list = [load_observable(path, system.n) for path in args.observables]
    if args.limit:
        result = multi_average_limit(system, f_list)
        payload = {"mode": "limit", **_average_payload(result)}
    else:
        if args.interval is None:
            raise StructuralError("provide --interval start:length or --limit")
        result = multi_average(system, f_list, _parse_interval(args.interval))
        payload = {"mode": "interval", **_average_payload(result)}
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["point", "value"])
        for x, v in enumerate(result.values.values):
            writer.writerow([x, format_rational(v)])
        print(buf.getvalue(), end="")
    else:
        print(dumps(payload))
    return EXIT_OK


def cmd_magic_check(args) -> int:
    cfg = _config(args)
    system = load_system(args.system)
    _require_valid_for_cli(system)
    order = _parse_order(args.order, system.d)
    star = build_star_system(system, order, cap=cfg.cap, threads=cfg.threads)
    wstar = wstar_partition(star)
    rng = random.Random(cfg.seed)
    failures = []
    for i in range(cfg.draws):
        G = random_observable(rng, star.size)
        F = G - star_conditional_expectation(star, G, wstar)
        res = magic_check(star, F, cap=cfg.cap)
        if not res.holds or res.star_pow != 0:
            failures.append(
                {"draw": i, "G": [format_rational(v) for v in G.values],
                 "star_pow": format_rational(res.star_pow)}
            )
    payload = {
        "carrier": star.size,
        "draws": cfg.draws,
        "seed": cfg.seed,
        "failures": failures,
        "all_hold": not failures,
    }
    print(dumps(payload))
    return EXIT_OK if not failures else EXIT_PROPERTY


def cmd_verify(args) -> int:
    cfg = _config(args)
    system = load_system(args.system)
    _require_valid_for_cli(system)
    order = _parse_order(args.order, system.d)
    outcomes = run_suite(
        system, order, seed=cfg.seed, draws=cfg.draws, cap=cfg.cap, threads=cfg.threads
    )
    failed = [o for o in outcomes if o.status == "FAIL"]
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["property", "status", "detail"])
        for o in outcomes:
            writer.writerow([o.name, o.status, o.detail])
        writer.writerow(["all", "PASS" if not failed else "FAIL", f"seed={cfg.seed}"])
        print(buf.getvalue(), end="")
    else:
        import json

        for o in outcomes:
            print(json.dumps(o.as_dict(), sort_keys=True))
        print(
            json.dumps(
                {"all_pass": not failed, "draws": cfg.draws, "seed": cfg.seed},
                sort_keys=True,
            )
        )
    return EXIT_OK if not failed else EXIT_PROPERTY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxlab",
        description=(
            "Exact-arithmetic cube measures, box seminorms, and multiple "
            "ergodic averages on finite commuting systems."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, order=True):
        p.add_argument("--cap", type=int, default=None,
                       help="sparse support cap (default 10^7 or BOXLAB_CAP)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads; output is identical for any value")
        if order:
            p.add_argument("--order", default=None,
                           help="comma-separated 0-based transform indices "
                                "(default: all transforms in file order)")

    p = sub.add_parser("validate", help="check system file invariants")
    p.add_argument("system")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("box-measure", help="print the cube measure as JSON")
    p.add_argument("system")
    common(p)
    p.set_defaults(func=cmd_box_measure)

    p = sub.add_parser("seminorm", help="box seminorm power of an observable")
    p.add_argument("system")
    p.add_argument("observable")
    p.add_argument("--method", choices=["measure", "oracle", "recursion", "all"],
                   default="measure")
    common(p)
    p.set_defaults(func=cmd_seminorm)

    p = sub.add_parser("gowers", help="Gowers uniformity norm power on Z/N")
    p.add_argument("N", type=int)
    p.add_argument("d", type=int)
    p.add_argument("observable")
    p.add_argument("--cross-check", action="store_true",
                   help="also compute the box seminorm of the shift system")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_gowers)

    p = sub.add_parser("average", help="multiple ergodic average over an interval")
    p.add_argument("system")
    p.add_argument("observables", nargs="+")
    p.add_argument("--interval", default=None, help="start:length")
    p.add_argument("--limit", action="store_true", help="exact full-period limit")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("magic-check", help="magic property on random draws")
    p.add_argument("system")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=50)
    common(p)
    p.set_defaults(func=cmd_magic_check)

    p = sub.add_parser("verify", help="run the full property suite")
    p.add_argument("system")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=200)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StructuralError as exc:
        print(dumps({"error": "parse", "message": str(exc)}), file=_sys.stderr)
        return EXIT_PARSE
    except SupportCapError as exc:
        print(dumps({"error": "support-cap", "message": str(exc), "cap": exc.cap}),
              file=_sys.stderr)
        return EXIT_CAP
    except InvariantViolationError as exc:
        print(dumps({"error": "invariant", "message": str(exc),
                     "violations": exc.report}), file=_sys.stderr)
        return EXIT_INVARIANT
    except PreconditionError as exc:
        print(dumps({"error": "precondition", "message": str(exc)}), file=_sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
