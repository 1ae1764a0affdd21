import json

from symplindex.cli import main

from conftest import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_maslov_rotation_fixture(capsys):
    args = ("maslov", fixture_path("rotation_lagrangian_path.json"), fixture_path("vertical_lagrangian.json"))
    code, rep = report(capsys, *args)
    assert code == 0 and rep["results"]["index"] == "+1"
    code, rep = report(capsys, *args, "--convention", "standard")
    assert rep["results"]["index"] == "-1" and rep["convention"] == "standard"
    assert rep["calibration"]["epsilon_q"] == -1


def test_constant_path_has_zero_index(capsys):
    code, rep = report(capsys, "maslov", fixture_path("constant_lagrangian_path.json"),
                       fixture_path("vertical_lagrangian.json"))
    assert code == 0 and rep["results"]["index"] == "0"


def test_undersampled_path_exits_with_chart_gap(capsys):
    code, out, err = run(capsys, "maslov", fixture_path("undersampled_lagrangian_path.json"),
                         fixture_path("vertical_lagrangian.json"))
    assert code == 2 and "refine" in err and out == ""


def test_cz_quarter(capsys):
    code, rep = report(capsys, "cz", fixture_path("quarter_rotation_path.json"))
    assert code == 0 and rep["results"]["index"] == "-1"
    code, out, _ = run(capsys, "cz", fixture_path("quarter_rotation_path.json"), "--text")
    assert out.strip() == "index -1"


def test_iterate_harmonic(capsys):
    code, rep = report(capsys, "iterate", fixture_path("harmonic_system.json"), "8",
                       "--convention", "standard")
    assert code == 0
    mags = [row["index"].lstrip("+-") for row in rep["results"]["table"]]
    assert mags == ["1", "1", "1", "2", "3", "3", "3", "4"]
    assert rep["results"]["extension_matches_power"]


def test_nu_report_is_byte_identical(capsys):
    args = ("nu", fixture_path("element_k1_m0.json"), "--seed", "3")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0 and out1 == out2
    assert json.loads(out1)["results"]["nu"] == 3


def test_usage_errors(capsys):
    assert run(capsys, "verify", "forms", "--trials", "0")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1


def test_invalid_document_reports_pointer(capsys, tmp_path):
    doc = json.loads(open(fixture_path("element_k1_m0.json")).read())
    doc["Q"][0] = [0.0, 1.0]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "nu", str(p))
    assert code == 1 and "/Q/0" in err


def test_calibrate_is_idempotent(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    assert run(capsys, "calibrate", "--config", str(cfg))[0] == 0
    first = cfg.read_text()
    assert run(capsys, "calibrate", "--config", str(cfg))[0] == 0
    assert cfg.read_text() == first
    assert json.loads(first)["calibration"]["epsilon_q"] == -1


def test_calibrate_degenerate_vector(capsys, tmp_path):
    code, _, err = run(capsys, "calibrate", "--force-degenerate", "--config", str(tmp_path / "c.json"))
    assert code == 3 and "CalibrationAmbiguous" in err


def test_config_supplies_defaults(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"convention": "standard", "seed": 11}))
    code, rep = report(capsys, "cz", fixture_path("quarter_rotation_path.json"), "--config", str(cfg))
    assert rep["seed"] == 11 and rep["results"]["index"] == "+1"
    code, rep = report(capsys, "cz", fixture_path("quarter_rotation_path.json"), "--config", str(cfg),
                       "--convention", "paper")
    assert rep["results"]["index"] == "-1"


def test_verify_product_includes_quarter_vector(capsys):
    code, rep = report(capsys, "verify", "product", "--seed", "7", "--trials", "2")
    assert code == 0 and rep["results"]["all_pass"]
    names = {c["check"] for c in rep["results"]["checks"]}
    assert "quarter_rotation_vector" in names


def test_verify_text_output(capsys):
    code, out, _ = run(capsys, "verify", "forms", "--trials", "3", "--text")
    assert code == 0
    assert all(line.startswith("forms/") and "pass" in line for line in out.strip().splitlines())
