import io
import json

import pytest

from tensorrep import cli


def run(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), out=buf)
    return code, buf.getvalue()


def test_pg_list():
    code, out = run("pg", "list")
    assert code == 0
    assert len(out.strip().splitlines()) == 12


def test_pg_elements_c6v():
    code, out = run("pg", "elements", "C6v")
    assert code == 0
    assert len(out.strip().splitlines()) == 12


def test_pg_table_formats():
    code, out = run("pg", "table", "C2v", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["entries"]) == 4
    code, out = run("pg", "table", "C2v", "--format", "csv")
    assert code == 0
    assert '"e"' in out


def test_pg_unknown_group_is_usage_error():
    code, _ = run("pg", "elements", "C5")
    assert code == 2


def test_st_show_and_verify():
    code, out = run("st", "show", "C4")
    assert code == 0
    assert json.loads(out)["group"] == "C4"
    code, out = run("st", "verify", "C4", "--grid", "720")
    assert code == 0
    assert "stabilizer = C4 (4 elements): PASS" in out
    assert "sampled surrogate" in out


def test_st_zheng_check():
    code, out = run("st", "zheng", "4", "--check", "C4v")
    assert code == 0
    assert "PASS" in out
    # C4 rotations also fix P4, but C6v does not
    code, out = run("st", "zheng", "4", "--check", "C6v")
    assert code == 1
    assert "FAIL" in out


def test_rep_spec():
    code, out = run("rep", "spec", "C3v")
    assert code == 0
    assert "I1 = v1.C*v1" in out
    assert "constraint relations:" in out


def test_iso_basis_count():
    code, out = run("iso", "basis", "--vec", "1", "--sym", "1", "--skew", "1")
    assert code == 0
    assert len(out.strip().splitlines()) == 6


def test_model_check_eval_stress(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"group": "C4v", "kind": "scalar",
                                "free": ["I1 + 0.3*I2^2 + 0.1*I3"],
                                "symmetrize": True}))
    code, out = run("model", "check", str(path), "--samples", "20")
    assert code == 0
    assert "equivariance residual" in out
    assert "witness" in out
    code, out = run("model", "eval", str(path), "--C", "1.2,0.9,0.1")
    assert code == 0
    assert out.startswith("psi = ")
    code, out = run("model", "stress", str(path), "--C", "1.2,0.9,0.1")
    assert code == 0
    assert out.startswith("T = ")


def test_model_check_fails_for_unsymmetrized(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"group": "C4", "kind": "tensor",
                                "free": ["I1", "I2^2", "I3", "1", "I1*I2"],
                                "symmetrize": False}))
    code, out = run("model", "check", str(path), "--samples", "20")
    assert code == 1
    assert "FAIL" in out


def test_model_bad_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{not json")
    code, _ = run("model", "check", str(path))
    assert code == 2
    code, _ = run("model", "check", str(tmp_path / "missing.json"))
    assert code == 2


def test_model_bad_c_argument(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"group": "C4v", "kind": "scalar",
                                "free": ["I1"]}))
    code, _ = run("model", "eval", str(path), "--C", "1.2,0.9")
    assert code == 2


def test_tol_env_var(tmp_path, monkeypatch):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"group": "C4v", "kind": "scalar",
                                "free": ["I1 + I2^2"], "symmetrize": True}))
    monkeypatch.setenv("TENSORREP_TOL", "1e-30")
    code, out = run("model", "check", str(path), "--samples", "5")
    # residuals ~1e-16 exceed an absurdly tight tolerance
    assert code == 1
    code, out = run("model", "check", str(path), "--samples", "5", "--tol", "1e-9")
    assert code == 0  # flag overrides the environment


def test_usage_error_exit_code():
    assert run("pg")[0] == 2
    assert run("frobnicate")[0] == 2
