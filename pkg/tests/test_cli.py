import contextlib
import io
import json
from fractions import Fraction
from pathlib import Path

import pytest

from boxlab import cli
from boxlab.seminorm import SeminormValue
from boxlab.serialize import system_to_dict
from conftest import Z4_TWO

DATA = Path(__file__).parent / "data"


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(argv)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def z4_file(tmp_path):
    path = tmp_path / "z4.json"
    path.write_text(json.dumps(system_to_dict(Z4_TWO)))
    return str(path)


@pytest.fixture
def sign_file(tmp_path):
    path = tmp_path / "sign.json"
    path.write_text(json.dumps({"values": ["1", "-1", "1", "-1"]}))
    return str(path)


# ------------------------------------------------------------- validate

def test_validate_ok(z4_file):
    code, out, _ = run_cli(["validate", z4_file])
    assert code == 0
    assert json.loads(out) == {"valid": True, "violations": []}


def test_validate_reports_violations(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps(
            {"points": 2, "weights": ["1/3", "2/3"], "transforms": [[1, 0], [0, 0]]}
        )
    )
    code, out, _ = run_cli(["validate", str(path)])
    assert code == 1
    payload = json.loads(out)
    assert not payload["valid"]
    assert "transform 1 not a bijection" in payload["violations"]
    assert any("measure preservation" in v for v in payload["violations"])


def test_validate_malformed_json_exits_2(tmp_path):
    path = tmp_path / "garbage.json"
    path.write_text("{not json")
    code, _, err = run_cli(["validate", str(path)])
    assert code == 2
    assert "parse" in err


def test_validate_missing_file_exits_2():
    code, _, _ = run_cli(["validate", "/nonexistent/system.json"])
    assert code == 2


def test_structural_shape_error_exits_2(tmp_path):
    path = tmp_path / "short.json"
    path.write_text(
        json.dumps({"points": 3, "weights": ["1/3"] * 3, "transforms": [[0, 1]]})
    )
    code, _, _ = run_cli(["validate", str(path)])
    assert code == 2


# ------------------------------------------------------------- box-measure

def test_box_measure_matches_golden_bytes(z4_file):
    golden = (DATA / "z4_box_measure_golden.json").read_text()
    code, out, _ = run_cli(["box-measure", z4_file, "--order", "0,1"])
    assert code == 0
    assert out == golden


def test_box_measure_identity_diagonal(tmp_path):
    path = tmp_path / "ident.json"
    path.write_text(
        json.dumps(
            {"points": 2, "weights": ["1/2", "1/2"], "transforms": [[0, 1], [0, 1]]}
        )
    )
    code, out, _ = run_cli(["box-measure", str(path)])
    assert code == 0
    payload = json.loads(out)
    assert payload["entries"] == [
        {"tuple": [0, 0, 0, 0], "mass": "1/2"},
        {"tuple": [1, 1, 1, 1], "mass": "1/2"},
    ]


def test_box_measure_cap_exceeded_exits_3(z4_file):
    code, _, err = run_cli(["box-measure", z4_file, "--cap", "10"])
    assert code == 3
    assert "support-cap" in err


def test_box_measure_env_cap(z4_file, monkeypatch):
    monkeypatch.setenv("BOXLAB_CAP", "10")
    code, _, _ = run_cli(["box-measure", z4_file])
    assert code == 3
    monkeypatch.setenv("BOXLAB_CAP", "1000000")
    code, _, _ = run_cli(["box-measure", z4_file])
    assert code == 0
    monkeypatch.setenv("BOXLAB_CAP", "zero")
    code, _, _ = run_cli(["box-measure", z4_file])
    assert code == 2


def test_box_measure_invalid_system_exits_1(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps({"points": 2, "weights": ["1/3", "2/3"], "transforms": [[1, 0]]})
    )
    code, _, err = run_cli(["box-measure", str(path)])
    assert code == 1
    assert "invariant" in err


# ------------------------------------------------------------- seminorm

def test_seminorm_all_methods_agree(z4_file, sign_file):
    code, out, _ = run_cli(
        ["seminorm", z4_file, sign_file, "--method", "all"]
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["agree"] is True
    assert payload["results"]["measure"]["pow"] == payload["results"]["oracle"]["pow"]


def test_seminorm_single_method(z4_file, sign_file):
    code, out, _ = run_cli(["seminorm", z4_file, sign_file, "--method", "oracle"])
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"pow", "root_approx", "d", "order"}


def test_seminorm_injected_fault_exits_4(z4_file, sign_file, monkeypatch):
    def broken(sys, order, f, **kwargs):
        return SeminormValue(len(order), Fraction(999), tuple(order))

    monkeypatch.setattr(cli, "seminorm_oracle_pow", lambda sys, order, f: broken(sys, order, f))
    code, out, _ = run_cli(["seminorm", z4_file, sign_file, "--method", "all"])
    assert code == 4
    assert json.loads(out)["error"] == "methods disagree"


def test_seminorm_constant_one(z4_file, tmp_path):
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"values": ["1", "1", "1", "1"]}))
    code, out, _ = run_cli(["seminorm", z4_file, str(path)])
    assert code == 0
    assert json.loads(out)["pow"] == "1"


# ------------------------------------------------------------- gowers

def test_gowers_value_and_cross_check(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"values": ["1", "-1"]}))
    code, out, _ = run_cli(["gowers", "2", "2", str(path)])
    assert code == 0
    assert json.loads(out)["pow"] == "1"
    code, out, _ = run_cli(["gowers", "2", "2", str(path), "--cross-check"])
    assert code == 0
    assert json.loads(out)["cross_check"] is True


def test_gowers_injected_fault_exits_4(tmp_path, monkeypatch):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"values": ["1", "-1", "0"]}))
    monkeypatch.setattr(cli, "gowers_norm_pow", lambda N, d, f: Fraction(12345))
    code, _, _ = run_cli(["gowers", "3", "2", str(path), "--cross-check"])
    assert code == 4


# ------------------------------------------------------------- average

def test_average_full_period_equals_limit(z4_file, sign_file):
    code, interval_out, _ = run_cli(
        ["average", z4_file, sign_file, sign_file, "--interval", "0:4"]
    )
    assert code == 0
    code, limit_out, _ = run_cli(["average", z4_file, sign_file, sign_file, "--limit"])
    assert code == 0
    assert json.loads(interval_out)["values"] == json.loads(limit_out)["values"]


def test_average_csv_format(z4_file, sign_file):
    code, out, _ = run_cli(
        ["average", z4_file, sign_file, sign_file, "--limit", "--format", "csv"]
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "point,value"
    assert len(lines) == 5


def test_average_requires_interval_or_limit(z4_file, sign_file):
    code, _, _ = run_cli(["average", z4_file, sign_file, sign_file])
    assert code == 2
    code, _, _ = run_cli(
        ["average", z4_file, sign_file, sign_file, "--interval", "nonsense"]
    )
    assert code == 2


def test_average_wrong_observable_count(z4_file, sign_file):
    code, _, _ = run_cli(["average", z4_file, sign_file, "--limit"])
    assert code == 2


# ------------------------------------------------------------- magic-check

def test_magic_check_passes(z4_file):
    code, out, _ = run_cli(["magic-check", z4_file, "--draws", "5", "--seed", "3"])
    assert code == 0
    payload = json.loads(out)
    assert payload["all_hold"] is True and payload["carrier"] == 32


def test_magic_check_injected_fault_exits_5(z4_file, monkeypatch):
    from boxlab.magic import MagicCheck

    monkeypatch.setattr(
        cli, "magic_check", lambda star, F, cap=None: MagicCheck(True, Fraction(1), False)
    )
    code, out, _ = run_cli(["magic-check", z4_file, "--draws", "2"])
    assert code == 5
    assert json.loads(out)["failures"]


# ------------------------------------------------------------- verify

def test_verify_passes_jsonl(z4_file):
    code, out, _ = run_cli(["verify", z4_file, "--draws", "8", "--seed", "1"])
    assert code == 0
    lines = out.strip().splitlines()
    summary = json.loads(lines[-1])
    assert summary == {"all_pass": True, "draws": 8, "seed": 1}
    names = [json.loads(line)["property"] for line in lines[:-1]]
    assert names[0] == "system-valid" and "magic" in names
    assert all(json.loads(line)["status"] == "PASS" for line in lines[:-1])


def test_verify_csv(z4_file):
    code, out, _ = run_cli(
        ["verify", z4_file, "--draws", "5", "--format", "csv"]
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "property,status,detail"
    assert lines[-1].startswith("all,PASS")


def test_verify_injected_failure_exits_5(z4_file, monkeypatch):
    from boxlab.verify import PropertyOutcome

    def fake_suite(sys, order, seed=0, draws=0, cap=0, threads=1):
        return [
            PropertyOutcome("system-valid", "PASS", "ok"),
            PropertyOutcome("csg", "FAIL", "bound violated", {"draw": 3}),
        ]

    monkeypatch.setattr(cli, "run_suite", fake_suite)
    code, out, _ = run_cli(["verify", z4_file])
    assert code == 5
    lines = out.strip().splitlines()
    failing = json.loads(lines[1])
    assert failing["status"] == "FAIL" and failing["counterexample"] == {"draw": 3}


def test_verify_exit_1_on_invalid_system(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps({"points": 2, "weights": ["1/3", "2/3"], "transforms": [[1, 0]]})
    )
    code, _, _ = run_cli(["verify", str(path)])
    assert code == 1
