import json
import subprocess
import sys

import pytest

from qspectra.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_examples(capsys):
    assert run(capsys, "compute", "weights", "--m", "1", "--n", "0") == (0, "d1 = q^-1\n", "")
    assert run(capsys, "compute", "p-image", "--m", "1", "--n", "1", "--k", "0")[:2] == (0, "0\n")
    assert run(capsys, "compute", "lr", "--lam", "(2,1)", "--mu", "(2,1)", "--nu", "(3,2,1)")[:2] == (0, "2\n")
    assert run(capsys, "compute", "lr", "--lam", "[2,1]", "--mu", "[2,1]", "--nu", "[3,2,1]")[:2] == (0, "2\n")


@pytest.mark.parametrize("argv,expected", [
    (("ek", "--m", "2", "--k", "2"), "mu1*mu2"),
    (("hk", "--m", "1", "--k", "3"), "mu1^3"),
    (("pk-classical", "--m", "2", "--k", "2"), "mu1^2 + mu2^2"),
    (("ak", "--m", "1", "--n", "1", "--k", "2"), "q^2*nu1^2 - mu1*nu1"),
    (("sk", "--m", "0", "--n", "1", "--k", "1"), "-q*nu1"),
    (("pik", "--m", "0", "--n", "1", "--k", "3"), "-q^3*nu1^3"),
    (("p-image", "--m", "1", "--n", "1", "--k", "1"), "-q*nu1 + q^-1*mu1"),
    (("schur", "--m", "1", "--n", "1", "--lam", "(2,2)"), "0"),
    (("weights", "--m", "0", "--n", "1"), "d~1 = -q"),
    (("u", "--m", "1", "--n", "0", "--k", "0"), "q^-1*mu1"),
    (("f", "--m", "1", "--n", "0", "--k", "0"), "1"),
    (("f", "--m", "1", "--n", "0", "--k", "1"), "mu1 - q^-2*mu1"),
    (("f", "--m", "1", "--n", "0"), "(-z + q^-2*mu1)/(mu1 - z)"),
])
def test_compute_quantities(capsys, argv, expected):
    code, out, _ = run(capsys, "compute", *argv)
    assert code == 0 and out.strip() == expected


def test_compute_json(capsys):
    code, out, _ = run(capsys, "compute", "weights", "--m", "1", "--n", "0", "--format", "json")
    assert code == 0 and json.loads(out) == {"quantity": "weights", "value": ["d1 = q^-1"]}


@pytest.mark.parametrize("argv", [
    ("compute", "lr", "--lam", "(1,2)", "--mu", "(1)", "--nu", "(2,1)"),
    ("compute", "lr", "--lam", "(2,x)", "--mu", "(1)", "--nu", "(2,1)"),
    ("compute", "lr", "--lam", "(2)"),
    ("compute", "ak", "--m", "1", "--n", "1"),
    ("compute", "weights", "--m", "-1", "--n", "1"),
    ("compute", "weights", "--m", "0", "--n", "0"),
    ("verify", "nope"),
    ("verify", "lemma2", "--m", "1", "--n", "1", "--kmax", "9"),
    ("verify", "lemma2", "--m", "1"),
    ("verify", "lemma2", "--m", "1", "--n", "1", "--mode", "fast"),
    ("bogus",),
    (),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_verify_examples(capsys):
    assert run(capsys, "verify", "lemma2", "--m", "2", "--n", "1", "--kmax", "6", "--mode", "symbolic")[0] == 0
    assert run(capsys, "verify", "all", "--m", "1", "--n", "1", "--kmax", "4", "--mode", "evaluated",
               "--seed", "7")[0] == 0
    code, out, _ = run(capsys, "verify", "p0", "--m", "0", "--n", "2")
    assert code == 0 and "-q^3 - q vs -q^3 - q" in out


def test_verify_json_single_and_grid(capsys):
    code, out, _ = run(capsys, "verify", "p0", "--m", "1", "--n", "1", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["identity"] == "p0" and d["seed"] is None
    code, out, _ = run(capsys, "verify", "p0", "--format", "json", "--mode", "evaluated")
    d = json.loads(out)
    assert code == 0 and len(d["reports"]) == 6 and d["summary"] == {"pass": 6, "fail": 0}
    assert all(r["seed"] == 0 for r in d["reports"])


def test_verify_order_env(capsys, monkeypatch):
    monkeypatch.setenv("QSPECTRA_ORDER", "3")
    assert run(capsys, "verify", "wronski", "--m", "1", "--n", "1", "--kmax", "4")[0] == 2
    code, out, _ = run(capsys, "verify", "wronski", "--m", "1", "--n", "1", "--format", "json")
    assert code == 0 and len(json.loads(out)["cells"]) == 3


def test_verify_failure_exit_1(capsys, monkeypatch):
    import qspectra.spectral as sp
    orig = sp.build_weights
    monkeypatch.setattr(sp, "build_weights", lambda ctx, **kw: orig(ctx, odd_exp=3))
    sp.images_for.cache_clear()
    try:
        code, out, _ = run(capsys, "verify", "newton-anti", "--m", "1", "--n", "1", "--kmax", "2")
    finally:
        sp.images_for.cache_clear()
    assert code == 1 and "FAIL" in out and "witness: q-anti" in out


def test_report_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "wronski", "--m", "1", "--n", "1", "--kmax", "3", "--format", "json")
    path = tmp_path / "r.json"
    path.write_text(out)
    code, text, _ = run(capsys, "report", str(path))
    assert code == 0 and "summary: 3 pass, 0 fail" in text
    code, again, _ = run(capsys, "report", str(path), "--format", "json")
    assert json.loads(again) == json.loads(out)
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "report", str(bad))[0] == 2
    failing = json.loads(out)
    failing["cells"][0]["status"] = "fail"
    path.write_text(json.dumps(failing))
    assert run(capsys, "report", str(path))[0] == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qspectra", "compute", "weights", "--m", "1", "--n", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "d1 = q^-1\n"
