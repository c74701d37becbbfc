import csv
import io
import json
import subprocess
import sys

import pytest

import oracles

from symreeb.cli import RunConfig, main, run

AXES = ["--axes", "1.0", "1.4142135623730951"]


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_chord_index_json(capsys):
    code, out, _ = _run(capsys, "chord-index", *AXES)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and doc["command"] == "chord-index"
    rows = {r[0]: r for r in doc["rows"]}
    assert abs(rows["c1"][1] - 0.5) < 1e-8 and rows["c1"][2:4] == ["3/2", "3/2"]
    assert abs(rows["c2"][1] - 2 ** 0.5 / 2) < 1e-8 and rows["c2"][2:4] == ["5/2", "5/2"]
    assert doc["degenerate_families"] == []


def test_iterate_csv(capsys):
    code, out, _ = _run(capsys, "iterate", *AXES, "--ell-max", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    c1 = [r for r in rows if r["chord"] == "c1"]
    ref = [str(oracles.ellipsoid_mu(1 / oracles.SQRT2, ell)) for ell in range(1, 5)]
    assert [r["mu_I"] for r in c1] == ref
    assert [r["mu_CZ"] for r in c1] == ["", "3", "", "7"]


def test_jump_search_table(capsys):
    code, out, _ = _run(capsys, "jump-search", *AXES, "--m-max", "40", "--format", "table")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["K", "m", "count", "verdict"]
    first = lines[2].split()
    assert first == ["10", "3;2", "2", "True"]


def test_expected_hw(capsys):
    code, out, _ = _run(capsys, "expected-hw", "--n", "2", "--N", "5")
    assert code == 0
    assert json.loads(out)["rows"] == [[k, 1] for k in range(1, 6)]


def test_ss_pages_fixture(capsys):
    code, out, _ = _run(capsys, "ss-pages", "--fixture", "sphere", "--n", "2", "--N", "6")
    assert code == 0
    doc = json.loads(out)
    H = {int(k): v for k, v in doc["homology"].items() if v}
    assert {k: v for k, v in H.items() if k <= doc["stable_top"]} == {0: 1, 1: 1, 2: 1}


def test_relation_error_exit(capsys):
    code, out, err = _run(capsys, "ss-pages", "--fixture", "twisted-point", "--N", "2")
    assert code == 1 and out == ""
    payload = json.loads(err)
    assert payload["error"] == "relation" or "relation" in json.dumps(payload)


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"schema_version": 1, "command": "expected-hw", "n": 3, "N": 4,
                               "relative_homology": {"3": 1}}))
    code, out, _ = _run(capsys, "run", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["rows"] == [[k, 1] for k in range(1, 5)]


def test_malformed_config(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{\n  "schema_version": 1,\n  "command": oops\n}\n')
    code, _, err = _run(capsys, "run", "--config", str(cfg))
    assert code == 2
    assert f"{cfg}:3:14" in err


@pytest.mark.parametrize("doc", [
    {"schema_version": 1, "command": "expected-hw", "n": 2, "colour": "red"},
    {"schema_version": 2, "command": "expected-hw", "n": 2},
    {"schema_version": 1, "command": "expected-hw", "n": 2, "format": "xml"},
    {"schema_version": 1, "command": "chord-index", "model": {"family": "ellipsoid", "axes": [1, 2]},
     "tolerances": {"newton": 1e-9}},
])
def test_invalid_config(tmp_path, capsys, doc):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(doc))
    code, _, err = _run(capsys, "run", "--config", str(cfg))
    assert code == 2 and err


def test_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["chord-index", *AXES, "-o", str(a)]) == 0
    assert main(["chord-index", *AXES, "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_workers_env(monkeypatch):
    monkeypatch.setenv("SYMREEB_WORKERS", "2")
    cfg = RunConfig(command="jump-search", model={"family": "ellipsoid", "axes": [1.0, 2 ** 0.5]}, m_max=20)
    assert cfg.worker_count == 2
    serial = run(RunConfig(command="jump-search", model=cfg.model, m_max=20, workers=1))
    assert run(cfg) == serial
    monkeypatch.setenv("SYMREEB_WORKERS", "many")
    with pytest.raises(Exception) as exc:
        cfg.worker_count
    assert getattr(exc.value, "exit_status", None) == 2


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "symreeb", "expected-hw", "--n", "1", "--N", "2",
                        "--format", "csv"], capture_output=True, text=True, check=True)
    assert p.stdout == "degree,dim\n1,1\n2,1\n"
