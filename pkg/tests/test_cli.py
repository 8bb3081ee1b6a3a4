import json

import pytest

from lamperc.cli import main


def run(args):
    return main(args)


def test_verify_writes_files_and_passes(tmp_path, capsys):
    code = run(["verify", "--group", "Z", "--lamp", "2", "--N", "6",
                "--mc-samples", "2000", "--out", str(tmp_path)])
    assert code == 0
    csv = (tmp_path / "moments.csv").read_text()
    assert csv.splitlines()[0] == "n,oracle,value,error"
    assert "2,wreath,1/8,0" in csv
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["passed"] is True
    assert rep["rows"][2]["wreath"] == "1/8"
    assert rep["meta"]["configDigest"]


def test_verify_reruns_byte_identical(tmp_path):
    args = ["verify", "--group", "Z", "--lamp", "2", "--N", "4",
            "--mc-samples", "1000", "--out", str(tmp_path)]
    assert run(args) == 0
    first = {f: (tmp_path / f).read_bytes() for f in ("moments.csv", "report.json")}
    assert run(args) == 0
    for f, data in first.items():
        assert (tmp_path / f).read_bytes() == data


def test_spectrum_outputs(tmp_path):
    code = run(["spectrum", "--group", "Z", "--lamp", "2",
                "--max-animal", "5", "--out", str(tmp_path)])
    assert code == 0
    lines = (tmp_path / "lambda.csv").read_text().splitlines()
    assert lines[0] == "index,value"
    values = [float(l.split(",")[1]) for l in lines[1:]]
    assert values == sorted(values)
    ids = json.loads((tmp_path / "ids.json").read_text())
    assert abs(sum(a["mass"] for a in ids["atoms"])
               + ids["unaccountedMass"] - 1) < 1e-12
    animals = json.loads((tmp_path / "animals.json").read_text())
    assert animals["animals"][0] == {
        "vertices": [], "boundary": ["0"], "weight": "1/2"}


def test_algebra_checks(tmp_path):
    code = run(["algebra-checks", "--group", "Z", "--lamp", "2",
                "--max-animal", "3", "--out", str(tmp_path)])
    assert code == 0
    rep = json.loads((tmp_path / "algebra.json").read_text())
    assert rep["passed"] is True
    names = [c["name"] for c in rep["checks"]]
    assert "projection idempotency" in names


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("group = Z\nlamp = 2\nN = 8\nmc-samples = 1000\n")
    out = tmp_path / "o1"
    assert run(["verify", "--config", str(cfg), "--N", "2",
                "--out", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["meta"]["N"] == "2"  # flag wins over file
    assert rep["meta"]["group"] == "Z"


def test_bad_inputs_exit_2(tmp_path):
    assert run(["verify", "--group", "nope", "--lamp", "2"]) == 2
    assert run(["verify", "--group", "Z"]) == 2  # neither lamp nor p
    assert run(["verify", "--group", "Z", "--lamp", "2", "--p", "1/3"]) == 2
    with pytest.raises(SystemExit) as exc:  # argparse rejects the choice itself
        run(["verify", "--group", "Z", "--lamp", "2", "--arith", "float"])
    assert exc.value.code == 2
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    assert run(["verify", "--config", str(cfg)]) == 2


def test_spectrum_with_explicit_p(tmp_path):
    code = run(["spectrum", "--group", "Z", "--p", "1/3",
                "--max-animal", "3", "--out", str(tmp_path)])
    assert code == 0
    animals = json.loads((tmp_path / "animals.json").read_text())
    # singleton at p = 1/3: (1/3)(2/3)^2 = 4/27
    assert animals["animals"][1]["weight"] == "4/27"
    assert not (tmp_path / "ids.json").exists()  # needs --lamp
