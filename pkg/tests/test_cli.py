"""Command-line behavior: outputs, formats, and the exit-code contract."""

import json

import pytest
from mpmath import fabs, mp, mpf

from regprod.cli import main

TABLE_OK = """\
name = listed
kind = table
growth_ratio = 2
amplitude = 3
correction_K = 0.001
correction_rho = 0.5
terms = 6 12 24 48 96 192 384 768 1536 3072 6144 12288 24576 49152 98304 196608
"""


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _sig_digits(rendered: str) -> int:
    mantissa = rendered.split("e")[0].split("E")[0]
    digits = [ch for ch in mantissa if ch.isdigit()]
    while digits and digits[0] == "0":
        digits.pop(0)
    return len(digits)


@pytest.fixture(autouse=True)
def _no_ambient_cap(monkeypatch):
    monkeypatch.delenv("REGPROD_MAX_TERMS", raising=False)


def test_compute_fibonacci_text_output(capsys):
    code, out, err = _run(capsys, "compute", "--sequence", "fibonacci",
                          "--digits", "10")
    assert code == 0
    assert err == ""
    assert "sequence: fibonacci" in out
    assert "route closed-form: 0.8992126808" in out
    assert "pass: true" in out


def test_compute_known_values(capsys):
    cases = [
        (("compute", "--sequence", "geometric", "--growth-ratio", "2",
          "--digits", "10"), "0.9438743127"),
        (("compute", "--sequence", "geometric", "--growth-ratio", "2",
          "--amplitude", "3", "--digits", "10"), "0.2281623026"),
        (("compute", "--sequence", "lucas", "--digits", "10"), "0.6522517456"),
        (("compute", "--sequence", "integers", "--digits", "10"), "2.506628275"),
    ]
    for argv, expected in cases:
        code, out, _ = _run(capsys, *argv)
        assert code == 0
        assert expected in out, "expected %s in output of %s" % (expected, argv)


def test_constant_values_and_json(capsys):
    code, out, _ = _run(capsys, "constant", "golden-mean", "--digits", "10")
    assert code == 0
    assert out.strip() == "1.618033989"

    code, out, _ = _run(capsys, "constant", "fibonacci-factorial",
                        "--digits", "10", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "1.226742011"
    assert doc["constant"] == "fibonacci-factorial"
    assert doc["digits"] == 10
    # canonical serialization round-trips byte for byte
    assert out.strip() == json.dumps(doc, sort_keys=True, indent=2)


def test_compute_json_document_shape_and_roundtrip(capsys):
    code, out, _ = _run(capsys, "compute", "--sequence", "fibonacci",
                        "--digits", "15", "--route", "theta", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"sequence", "digits", "routes", "max_disagreement",
                        "pass", "version"}
    assert doc["pass"] is True
    assert doc["digits"] == 15
    (entry,) = doc["routes"]
    assert set(entry) == {"route", "value", "error_bound", "terms_used"}
    assert entry["route"] == "theta"
    assert isinstance(entry["terms_used"], int)
    assert out.strip() == json.dumps(doc, sort_keys=True, indent=2)


def test_rendered_digit_count_tracks_request(capsys):
    for digits in (6, 10, 17):
        code, out, _ = _run(capsys, "compute", "--sequence", "fibonacci",
                            "--digits", str(digits), "--format", "json")
        assert code == 0
        value = json.loads(out)["routes"][0]["value"]
        assert _sig_digits(value) == digits, value


def test_verify_geometric_passes(capsys):
    code, out, err = _run(capsys, "verify", "--sequence", "geometric",
                          "--growth-ratio", "2", "--digits", "10",
                          "--format", "json")
    assert code == 0
    assert err == ""
    doc = json.loads(out)
    assert doc["pass"] is True
    assert [e["route"] for e in doc["routes"]] == ["closed-form", "extrapolation"]


def test_verify_spec_file_single_route(tmp_path, capsys):
    path = tmp_path / "t.spec"
    path.write_text(TABLE_OK)
    code, out, _ = _run(capsys, "verify", "--spec-file", str(path),
                        "--digits", "6", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["sequence"] == "listed"
    assert [e["route"] for e in doc["routes"]] == ["closed-form"]
    assert doc["pass"] is True


def test_verify_reports_route_failure(monkeypatch, capsys):
    monkeypatch.setenv("REGPROD_MAX_TERMS", "64")
    code, out, err = _run(capsys, "verify", "--sequence", "fibonacci",
                          "--digits", "10", "--format", "json")
    assert code == 1
    assert "route extrapolation failed" in err
    doc = json.loads(out)
    assert doc["pass"] is False
    assert [e["route"] for e in doc["routes"]] == ["closed-form", "theta"]


def test_compute_capped_extrapolation_fails(monkeypatch, capsys):
    monkeypatch.setenv("REGPROD_MAX_TERMS", "64")
    code, _, err = _run(capsys, "compute", "--sequence", "fibonacci",
                        "--digits", "10", "--route", "extrapolation")
    assert code == 5
    assert "error:" in err


def test_argument_errors_exit_2(capsys):
    for argv in (
        ("compute", "--sequence", "pell"),
        ("compute", "--sequence", "fibonacci", "--digits", "3"),
        ("compute", "--sequence", "fibonacci", "--digits", "2000"),
        ("compute", "--sequence", "fibonacci", "--spec-file", "x.spec"),
        ("compute", "--sequence", "fibonacci", "--growth-ratio", "2"),
        ("compute", "--sequence", "geometric"),
        ("compute", "--sequence", "geometric", "--growth-ratio", "inf"),
        ("compute", "--sequence", "geometric", "--growth-ratio", "1.0"),
        ("compute", "--sequence", "geometric", "--growth-ratio", "0.5"),
        ("compute",),
        ("compute", "--sequence", "fibonacci", "--route", "bogus"),
        ("constant", "unnamed"),
        (),
    ):
        code, _, err = _run(capsys, *argv)
        assert code == 2, "argv %s gave %d" % (argv, code)


def test_route_inapplicable_exits_4(capsys):
    code, _, err = _run(capsys, "compute", "--sequence", "lucas",
                        "--route", "theta")
    assert code == 4
    assert "theta" in err
    code, _, _ = _run(capsys, "compute", "--sequence", "integers",
                      "--route", "extrapolation")
    assert code == 4


def test_spec_file_errors_exit_3(tmp_path, capsys):
    code, _, err = _run(capsys, "compute", "--spec-file", "/no/such/file.spec")
    assert code == 3

    bad = tmp_path / "bad.spec"
    bad.write_text("name = x\nkind = geometric\ngrowth_ratio = 0.9\namplitude = 1\n")
    code, _, err = _run(capsys, "compute", "--spec-file", str(bad))
    assert code == 3
    assert "bad.spec:3" in err

    viol = tmp_path / "viol.spec"
    viol.write_text(TABLE_OK.replace(" 768 ", " 773 "))
    code, _, err = _run(capsys, "verify", "--spec-file", str(viol))
    assert code == 3
    assert "viol.spec:7" in err
    assert "term 8" in err


def test_spec_file_lucas_matches_builtin(tmp_path, capsys):
    path = tmp_path / "g.spec"
    path.write_text("name = golden\nkind = lucas_u\nP = 1\nQ = -1\n")
    code, out, _ = _run(capsys, "compute", "--spec-file", str(path),
                        "--digits", "20", "--format", "json")
    assert code == 0
    ours = json.loads(out)["routes"][0]["value"]
    code, out, _ = _run(capsys, "compute", "--sequence", "fibonacci",
                        "--digits", "20", "--format", "json")
    theirs = json.loads(out)["routes"][0]["value"]
    assert ours == theirs
    with mp.workdps(30):
        assert fabs(mpf(ours) - mpf("0.89921268078550088626")) < mpf("1e-19")


def test_version_flag(capsys):
    code, out, _ = _run(capsys, "--version")
    assert code == 0
    assert out.startswith("regprod ")
