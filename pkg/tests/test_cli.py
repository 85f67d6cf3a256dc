import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from indicial_lab.cli import main
from indicial_lab.config import ConfigError, load_config
from indicial_lab.report import roots_svg
from indicial_lab.roots import RootTable, build_table


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum(capsys):
    code, out, _ = run(["spectrum", "--kind", "function4", "--max", "40"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "kind,k,lambda,multiplicity"
    assert [ln.split(",")[2] for ln in lines[1:]] == ["0", "16", "40"]
    code, out, _ = run(["spectrum", "--kind", "closed1", "--max", "0"], capsys)
    assert code == 0 and out.splitlines() == ["kind,k,lambda,multiplicity"]
    code, out, _ = run(["spectrum", "--kind", "coclosed1", "--max", "50"], capsys)
    assert [ln.split(",")[2] for ln in out.splitlines()[1:]] == ["24", "48"]


def test_spectrum_bad_kind(capsys):
    code, _, err = run(["spectrum", "--kind", "nope", "--max", "4"], capsys)
    assert code == 2 and "nope" in err


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        main(["roots", "--lambda-max", "abc"])
    assert exc.value.code == 2


def test_roots_default(tmp_path, capsys):
    code, out, _ = run(["roots", "--out", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "roots.json").read_text())
    assert doc["summary"]["special_count"] == 6
    assert doc["summary"]["failures"] == []
    assert json.loads((tmp_path / "symmetry.json").read_text())["violations"] == []
    assert json.loads((tmp_path / "gap.json").read_text())["holds"] is True
    assert "3+6i" in out and "3+2.77657442368" in out and "3+0.11395774469" in out


def test_roots_lambda_too_small(tmp_path, capsys):
    code, _, err = run(["roots", "--lambda-max", "39", "--out", str(tmp_path)], capsys)
    assert code == 2 and "lambda_max" in err


def test_roots_tampered_line_tol(tmp_path, capsys):
    code, out, _ = run(["roots", "--line-tol", "10", "--out", str(tmp_path)], capsys)
    assert code == 3 and "FAILED" in out


def test_roots_strict_radical_tol(tmp_path, capsys):
    # the printed radicals are rounded at the 1e-9 level
    code, out, _ = run(["roots", "--radical-tol", "1e-9", "--out", str(tmp_path)], capsys)
    assert code == 3 and "theta2+" in out


def test_figure(tmp_path, capsys):
    assert run(["figure", "--out", str(tmp_path)], capsys)[0] == 0
    svg = (tmp_path / "roots.svg").read_text()
    assert 'viewBox="0 0 800 600"' in svg
    assert svg.count('class="root special"') == 6
    assert 'class="l2-line"' in svg
    table = build_table(400)
    assert svg.count("<circle") == len(table)


def test_empty_svg():
    svg = roots_svg(RootTable(()))
    assert "<circle" not in svg and 'class="axis"' in svg


def test_scattering_auto(tmp_path, capsys):
    out_file = tmp_path / "sc.csv"
    code, _, _ = run(["scattering", "--auto", "--kmax", "50", "--output", str(out_file)], capsys)
    assert code == 0
    rows = out_file.read_text().splitlines()
    header = rows[0].split(",")
    assert len(rows) == 1 + 3 * 51
    i_mod, i_or = header.index("modulus_dev"), header.index("oracle_dev")
    for r in rows[1:]:
        f = r.split(",")
        assert float(f[i_mod]) <= 1e-10 and float(f[i_or]) <= 1e-10


def test_scattering_needs_alpha(capsys):
    assert run(["scattering"], capsys)[0] == 2
    assert run(["scattering", "--alpha", "-1"], capsys)[0] == 2
    code, out, _ = run(["scattering", "--alpha", "1", "--kmax", "2"], capsys)
    assert code == 0 and len(out.splitlines()) == 4


def test_expansion(tmp_path, capsys):
    code, out, _ = run(["expansion", "--v1", "1"], capsys)
    assert code == 0
    assert out == "H_(4,0) = dx/x ∧ (v1 x^{3+6i} + S1(v1) x^{3−6i}) + O(x^{3+δ})\n"
    empty = tmp_path / "empty.json"
    empty.write_text("")
    code, out, _ = run(["expansion", "--data", str(empty)], capsys)
    assert code == 0 and out == "all components O(x^{3+δ})\n"
    data = tmp_path / "d.json"
    data.write_text(json.dumps({"v2": {"re": 1, "im": 0}, "star6sign": "-i"}))
    code, out, _ = run(["expansion", "--data", str(data), "--format", "json",
                        "--out", str(tmp_path / "ex")], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["star6sign"] == "-i" and len(doc["terms"]) == 10
    assert (tmp_path / "ex" / "expansion.txt").exists()


def test_expansion_bad_data(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["expansion", "--data", str(bad)], capsys)[0] == 2
    assert run(["expansion", "--data", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["expansion", "--v1", "1", "--delta", "1.5"], capsys)[0] == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text('lambda_max = 60\nradical_tol = 1e-8\n')
    code, _, _ = run(["roots", "--config", str(cfg), "--out", str(tmp_path / "o")], capsys)
    assert code == 0
    meta = json.loads((tmp_path / "o" / "roots.json").read_text())["metadata"]
    assert meta["lambda_max"] == 60
    # flags win over the file
    run(["roots", "--config", str(cfg), "--lambda-max", "50", "--out", str(tmp_path / "p")], capsys)
    assert json.loads((tmp_path / "p" / "roots.json").read_text())["metadata"]["lambda_max"] == 50


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("colour = 3\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    assert run(["roots", "--config", str(bad)], capsys)[0] == 2
    nested = tmp_path / "nested.toml"
    nested.write_text("[section]\nlambda_max = 3\n")
    with pytest.raises(ConfigError):
        load_config(nested)
    wrong = tmp_path / "wrong.toml"
    wrong.write_text('lambda_max = "many"\n')
    with pytest.raises(ConfigError):
        load_config(wrong)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.toml")


def _bundle(path: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


def test_all_byte_identical(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["all", "--out", str(a)], capsys)[0] == 0
    monkeypatch.setenv("INDICIAL_LAB_THREADS", "1")
    assert run(["all", "--out", str(b)], capsys)[0] == 0
    ba, bb = _bundle(a), _bundle(b)
    assert set(ba) == {"config.json", "expansion.json", "expansion.txt", "gap.json", "roots.json",
                       "roots.svg", "scattering.csv", "spectrum.csv", "symmetry.json"}
    assert ba == bb
    assert not any(p.name.startswith(".staging") for p in a.iterdir())


def test_unwritable_output(tmp_path, capsys):
    target = tmp_path / "file"
    target.write_text("x")
    code, _, err = run(["figure", "--out", str(target / "sub")], capsys)
    assert code == 1 and str(target) in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "indicial_lab", "spectrum", "--kind", "function6", "--max", "6"],
                       capture_output=True, text=True, env={**os.environ})
    assert r.returncode == 0
    assert r.stdout.splitlines()[1:] == ["function6,0,0,1", "function6,1,6,7"]
