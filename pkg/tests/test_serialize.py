import json
from fractions import Fraction

import pytest

from boxlab.box_measure import build_box_measure
from boxlab.errors import StructuralError
from boxlab.seminorm import seminorm_pow
from boxlab.serialize import (
    approx_root_str,
    format_rational,
    measure_from_dict,
    measure_to_dict,
    observable_from_dict,
    observable_to_dict,
    seminorm_to_dict,
    system_from_dict,
    system_to_dict,
)
from boxlab.system import Observable
from conftest import NONUNIFORM, Z4_TWO


def test_rational_strings():
    assert format_rational(Fraction(3, 4)) == "3/4"
    assert format_rational(Fraction(5)) == "5"
    assert format_rational(Fraction(-1, 2)) == "-1/2"


def test_system_round_trip():
    for sys in (Z4_TWO, NONUNIFORM):
        payload = system_to_dict(sys)
        assert system_from_dict(json.loads(json.dumps(payload))) == sys


def test_system_with_labels_round_trip():
    payload = system_to_dict(Z4_TWO)
    payload["labels"] = ["a", "b", "c", "d"]
    sys = system_from_dict(payload)
    assert sys.labels == ("a", "b", "c", "d")
    assert system_from_dict(system_to_dict(sys)) == sys


@pytest.mark.parametrize(
    "mutate",
    [
        lambda p: p.pop("points"),
        lambda p: p.update(points="four"),
        lambda p: p.update(weights=["1/4"] * 3),
        lambda p: p.update(transforms=[[1, 2, 3]]),
        lambda p: p.update(transforms=[["a", "b", "c", "d"]]),
        lambda p: p.update(weights=["1/4", "1/4", "1/0", "1/4"]),
        lambda p: p.update(weights=["1/4", "1/4", "abc", "1/4"]),
        lambda p: p.update(labels=["x"]),
    ],
)
def test_system_parse_errors(mutate):
    payload = system_to_dict(Z4_TWO)
    mutate(payload)
    with pytest.raises(StructuralError):
        system_from_dict(payload)


def test_observable_round_trip():
    f = Observable((Fraction(1, 2), Fraction(-3)), sup_bound=Fraction(3))
    assert observable_from_dict(observable_to_dict(f)) == f
    with pytest.raises(StructuralError):
        observable_from_dict({"values": ["1/2"]}, n=3)
    with pytest.raises(StructuralError):
        observable_from_dict({"values": "nope"})


def test_measure_round_trip_and_canonical_order():
    m = build_box_measure(Z4_TWO, (0, 1))
    payload = measure_to_dict(m)
    tuples = [tuple(e["tuple"]) for e in payload["entries"]]
    assert tuples == sorted(tuples)
    back = measure_from_dict(payload, base_n=4)
    assert back == m
    inferred = measure_from_dict(payload)
    assert inferred.entries == m.entries and inferred.base_n == 4


def test_measure_parse_errors():
    with pytest.raises(StructuralError):
        measure_from_dict({"k": 1, "entries": [{"tuple": [0], "mass": "1"}]})
    with pytest.raises(StructuralError):
        measure_from_dict(
            {"k": 0, "entries": [{"tuple": [0], "mass": "1/2"},
                                 {"tuple": [0], "mass": "1/2"}]}
        )


def test_seminorm_payload():
    value = seminorm_pow(Z4_TWO, (0, 1), Observable.constant(Fraction(1, 2), 4))
    payload = seminorm_to_dict(value)
    assert payload == {
        "pow": "1/16",
        "root_approx": "0.5",
        "d": 2,
        "order": [0, 1],
    }


def test_approx_root_digits():
    assert approx_root_str(Fraction(2), 1) == f"{2 ** 0.5:.12g}"
    assert approx_root_str(Fraction(0), 3) == "0"
