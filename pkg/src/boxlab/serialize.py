"""JSON file formats for systems, observables, measures, and results.

Rationals travel as strings, either "p/q" or a plain integer string.
Sparse measures serialize in canonical tuple order so identical inputs
produce byte-identical output regardless of construction order or thread
count.  Parse failures raise StructuralError (the CLI maps those to its
parse-error exit code).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

from .box_measure import SparseCubeMeasure
from .errors import StructuralError
from .seminorm import SeminormValue
from .system import FiniteSystem, Observable, as_fraction


def format_rational(q: Fraction) -> str:
    return str(q)


def approx_root_str(pow_value: Fraction, d: int, digits: int = 12) -> str:
    """Decimal rendering of the 2^d-th root, 12 significant digits.

    Approximate by construction; the exact rational power is the contract.
    """
    r = float(pow_value)
    for _ in range(d):
        r = math.sqrt(r)
    return f"{r:.{digits}g}"


def _require(payload: dict, key: str, context: str) -> Any:
    if key not in payload:
        raise StructuralError(f"{context}: missing required key {key!r}")
    return payload[key]


def system_to_dict(sys: FiniteSystem) -> dict:
    out = {
        "points": sys.n,
        "weights": [format_rational(w) for w in sys.weights],
        "transforms": [list(t) for t in sys.transforms],
    }
    if sys.labels is not None:
        out["labels"] = list(sys.labels)
    return out


def system_from_dict(payload: dict) -> FiniteSystem:
    if not isinstance(payload, dict):
        raise StructuralError("system file must hold a JSON object")
    n = _require(payload, "points", "system")
    if not isinstance(n, int) or n < 1:
        raise StructuralError(f"system: 'points' must be a positive integer, got {n!r}")
    weights = _require(payload, "weights", "system")
    transforms = _require(payload, "transforms", "system")
    if not isinstance(weights, list) or len(weights) != n:
        raise StructuralError(f"system: expected {n} weights")
    if not isinstance(transforms, list):
        raise StructuralError("system: 'transforms' must be a list of arrays")
    parsed_transforms = []
    for i, t in enumerate(transforms):
        if not isinstance(t, list) or len(t) != n:
            raise StructuralError(f"system: transform {i} must be an array of {n} ints")
        if not all(isinstance(v, int) for v in t):
            raise StructuralError(f"system: transform {i} holds non-integer entries")
        parsed_transforms.append(tuple(t))
    labels = payload.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != n:
            raise StructuralError(f"system: expected {n} labels")
        labels = tuple(str(s) for s in labels)
    return FiniteSystem(
        tuple(as_fraction(w) for w in weights), tuple(parsed_transforms), labels
    )


def observable_to_dict(f: Observable) -> dict:
    out = {"values": [format_rational(v) for v in f.values]}
    if f.sup_bound is not None:
        out["sup_bound"] = format_rational(f.sup_bound)
    return out


def observable_from_dict(payload: dict, n: int | None = None) -> Observable:
    if not isinstance(payload, dict):
        raise StructuralError("observable file must hold a JSON object")
    values = _require(payload, "values", "observable")
    if not isinstance(values, list):
        raise StructuralError("observable: 'values' must be a list")
    if n is not None and len(values) != n:
        raise StructuralError(f"observable: expected {n} values, got {len(values)}")
    bound = payload.get("sup_bound")
    return Observable(
        tuple(as_fraction(v) for v in values),
        None if bound is None else as_fraction(bound),
    )


def measure_to_dict(m: SparseCubeMeasure) -> dict:
    return {
        "k": m.k,
        "entries": [
            {"tuple": list(point), "mass": format_rational(mass)}
            for point, mass in m.items_sorted()
        ],
    }


def measure_from_dict(payload: dict, base_n: int | None = None) -> SparseCubeMeasure:
    if not isinstance(payload, dict):
        raise StructuralError("measure file must hold a JSON object")
    k = _require(payload, "k", "measure")
    raw_entries = _require(payload, "entries", "measure")
    if not isinstance(k, int) or k < 0:
        raise StructuralError(f"measure: invalid dimension {k!r}")
    if not isinstance(raw_entries, list):
        raise StructuralError("measure: 'entries' must be a list")
    entries: dict[tuple[int, ...], Fraction] = {}
    width = 1 << k
    top = -1
    for item in raw_entries:
        point = tuple(_require(item, "tuple", "measure entry"))
        if len(point) != width or not all(isinstance(c, int) for c in point):
            raise StructuralError(f"measure: entry tuple {point} must hold {width} ints")
        if point in entries:
            raise StructuralError(f"measure: duplicate entry for {point}")
        entries[point] = as_fraction(_require(item, "mass", "measure entry"))
        top = max(top, max(point))
    if base_n is None:
        base_n = top + 1
    return SparseCubeMeasure(k, base_n, entries)


def seminorm_to_dict(value: SeminormValue) -> dict:
    return {
        "pow": format_rational(value.pow),
        "root_approx": approx_root_str(value.pow, value.d),
        "d": value.d,
        "order": list(value.order),
    }


def dumps(payload: dict) -> str:
    """Canonical JSON rendering used for all CLI output."""
    return json.dumps(payload, indent=2, sort_keys=True)


def load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise StructuralError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StructuralError(f"{path} is not valid JSON: {exc}") from exc


def load_system(path: str) -> FiniteSystem:
    return system_from_dict(load_json(path))


def load_observable(path: str, n: int | None = None) -> Observable:
    return observable_from_dict(load_json(path), n)
