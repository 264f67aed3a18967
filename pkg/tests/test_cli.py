from __future__ import annotations

import json

import pytest

from tatek.cli import main

ZP5 = {"kind": "zp", "p": 5, "precision": 8}
T = {"laurent": [{"exp": 1}]}
T_TIMES_I2 = {"n": 2, "ring": ZP5, "entries": [[T, 0], [0, T]]}


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, (json.loads(out) if out.strip() else None), out


def test_norm_examples(capsys, tmp_path):
    ring = tmp_path / "zp5.json"
    ring.write_text(json.dumps(ZP5))
    status, js, _ = run(capsys, "norm", "--ring", str(ring), "--elem", "50")
    assert status == 0 and js["exponent"] == 2 and "input_hash" in js
    assert run(capsys, "norm", "--ring", "zp5", "--elem", "0")[1]["exponent"] == "+inf"
    assert run(capsys, "norm", "--ring", "zp5", "--elem", "7")[1]["exponent"] == 0


def test_bass_retract_on_t_identity(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps(T_TIMES_I2))
    status, js, _ = run(capsys, "bass-retract", "--matrix", str(f))
    assert status == 0 and js["r"] == 2
    assert {"ledger", "certificates", "input_hash"} <= set(js)


def test_k1cont_level_one(capsys):
    status, js, _ = run(capsys, "k1cont", "--ring", "qp5", "--level", "1")
    assert status == 0
    assert (js["free_rank"], js["torsion"]) == (1, [4])


def test_witt_teichmuller_pi(capsys):
    status, js, _ = run(capsys, "witt", "teichmuller-pi", "--L", "3")
    assert status == 0 and len(js["coefficients"]) == 3


def test_witt_mul_and_membership(capsys):
    status, js, _ = run(capsys, "witt", "mul", "--f", "[3, 9, 27]", "--g", "[1, 0, 0]")
    assert status == 0 and js["L"] == 3
    status, js, _ = run(capsys, "witt", "ideal-member", "--f", "[3, 9, 27]", "--n", "1")
    assert status == 0 and js["member"] is True
    assert run(capsys, "witt", "add", "--f", "[1]")[0] == 2


def test_tame_symbol_and_split(capsys):
    status, js, _ = run(capsys, "tame-symbol", "--ring", "qp5", "--a", "5", "--b", "5")
    assert status == 0 and js["v_a"] == 1 and js["residue_field_order"] == 5
    x = json.dumps({"laurent": [{"exp": 0}, {"exp": 1, "coeff": 5}, {"exp": -1, "coeff": 25}]})
    status, js, _ = run(capsys, "laurent-split", "--ring", "zmod15625", "--x", x, "--n", "1",
                        "--levels", "3")
    assert status == 0 and js["check"]["congruent"] and js["level"] == 4


def test_k0an_constant(capsys):
    status, js, _ = run(capsys, "k0an-pi0", "--ring", "zp3", "--j", "3")
    assert status == 0 and js["constant"] and len(js["levels"]) == 4


def test_glrho_certificate_and_env_override(capsys, monkeypatch):
    one_plus_pi = {"n": 2, "ring": ZP5, "entries": [[6, 0], [0, 1]]}
    m = json.dumps(one_plus_pi)
    status, js, _ = run(capsys, "glrho-cert", "--matrix", m, "--j", "0")
    assert status == 0 and js["certified"] is True
    status, js, _ = run(capsys, "glrho-cert", "--matrix", m, "--j", "1")
    assert status == 0 and js["certified"] is False
    monkeypatch.setenv("TATEK_MAX_EXPONENT", "0")
    assert run(capsys, "glrho-cert", "--matrix", m, "--j", "0")[0] == 2


def test_verify_all_empty(capsys):
    status, js, _ = run(capsys, "verify", "all", "--size", "0")
    assert status == 0 and js["cases"] == 0 and js["passed"]


def test_verify_bass_seed_seven(capsys):
    status, js, _ = run(capsys, "verify", "bass", "--seed", "7")
    assert status == 0 and js["failures"] == []


def test_bad_fixture_gives_one_failure(capsys, tmp_path):
    # det(1 + t) is not a unit times a power of t
    bad = {"matrix": {"n": 1, "ring": ZP5,
                      "entries": [[{"laurent": [{"exp": 0}, {"exp": 1}]}]]},
           "expected_r": 0}
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(bad))
    status, js, _ = run(capsys, "verify", "bass", "--size", "0", "--fixture", str(f))
    assert status == 1 and len(js["failures"]) == 1
    assert js["failures"][0]["counterexample"]


def test_usage_errors_exit_two(capsys):
    assert main(["verify", "nosuch"]) == 2
    assert main(["norm", "--ring", "zp5", "--elem", "{oops"]) == 2
    assert main(["norm", "--ring", "zmod25", "--precision", "3", "--elem", "1"]) == 2
    assert main(["verify", "bass", "--size", "-1"]) == 2
    assert main(["k1cont", "--ring", "zmod25", "--level", "1"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_out_flag_in_either_position(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["--out", str(a), "norm", "--ring", "zp5", "--elem", "50"]) == 0
    assert main(["norm", "--ring", "zp5", "--elem", "50", "--out", str(b)]) == 0
    assert capsys.readouterr().out == ""
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["exponent"] == 2


def test_reports_are_byte_identical(capsys):
    first = run(capsys, "verify", "witt", "--seed", "3", "--size", "5")[2]
    second = run(capsys, "verify", "witt", "--seed", "3", "--size", "5")[2]
    assert first == second
    other = run(capsys, "norm", "--ring", "zp5", "--elem", "51")[1]["input_hash"]
    assert other != run(capsys, "norm", "--ring", "zp5", "--elem", "50")[1]["input_hash"]
