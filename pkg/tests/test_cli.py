import json

import pytest

from arealaw.cli import main
from arealaw.harness import CSV_COLUMNS, load_records


def test_compute_zero_coupling_exact(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert main(["compute", "--d", "1", "--n", "8", "--m", "3", "--c", "0", "--out", str(out)]) == 0
    (rec,) = load_records(out)
    assert rec.S_nats == 0.0 and rec.EN_nats == 0.0


def test_compute_stdout_json(capsys):
    assert main(["compute", "--d", "2", "--n", "6", "--m", "2", "--c", "0.1", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    rec = doc["records"][0]
    assert rec["EN_nats"] >= rec["S_nats"] > 0
    assert doc["schema"] == 1


def test_compute_measure_selection(capsys):
    assert main(["compute", "--d", "1", "--n", "8", "--m", "3", "--c", "0.2", "--measure", "en"]) == 0
    header, row = capsys.readouterr().out.strip().splitlines()
    cells = dict(zip(header.split(","), row.split(",")))
    assert cells["S_nats"] == "" and float(cells["EN_nats"]) > 0


def test_usage_errors(capsys):
    assert main(["compute", "--d", "1", "--n", "8", "--m", "3", "--c", "0.6"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["compute", "--d", "1"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


@pytest.mark.parametrize(
    "args",
    [
        ["--d", "1", "--n", "16", "--c", "0.2"],
        ["--d", "2", "--n", "8", "--c", "0.1"],
        ["--d", "1", "--n", "16", "--c", "0.2", "--model", "squared"],
    ],
)
def test_verify_passes(args, capsys):
    assert main(["verify", *args]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_sweep_and_fit(tmp_path, capsys):
    cfg = {"d": 2, "c": 0.1, "n": [12], "m": [4, 5, 6], "format": "json", "out": str(tmp_path / "s.json")}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    assert main(["sweep", "--config", str(path)]) == 0
    assert main(["fit", "--input", str(tmp_path / "s.json"), "--measure", "en"]) == 0
    fit = json.loads(capsys.readouterr().out)
    assert fit["points"] == 3 and fit["C1"] <= fit["C2"]


def test_sweep_bad_config(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == 1


def test_sweep_csv_stdout(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"d": 1, "c": 0.2, "n": [12], "m": [3, 4]}))
    assert main(["sweep", "--config", str(path)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) and len(lines) == 3
