import json
import os
import subprocess
import sys

import pytest

from zariski.cli import ReportDocument, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_components_table(capsys):
    code, out, _ = run(capsys, "components", "A19")
    assert code == 0
    assert "[M0]" in out and "Total connected components: 2" in out
    assert "No pair" in out


def test_components_json_roundtrip(capsys):
    code, out, _ = run(capsys, "components", "A16+A3", "--json")
    assert code == 0
    doc = ReportDocument.parse(out)
    assert doc.command == "components"
    assert doc.payload["total_components"] == 2
    assert ReportDocument.parse(doc.render()) == doc
    assert json.loads(doc.render()) == json.loads(out)


def test_forms(capsys):
    code, out, _ = run(capsys, "forms", "--det", "55", "--json")
    assert code == 0
    names = [c["form"] for c in json.loads(out)["payload"]["classes"]]
    assert names == ["Λ[2,1,28]", "Λ[4,1,14]", "Λ[8,3,8]"]
    code, out, _ = run(capsys, "forms", "--disc", "-23")
    assert code == 0 and "(2,1,3)" in out


def test_cm(capsys):
    code, out, _ = run(capsys, "cm", "--disc", "-55", "--hilbert")
    assert code == 0
    assert "Z/4" in out and "13136684625*t^3" in out


@pytest.mark.parametrize("argv,code", [
    (["components", "A1"], 2),
    (["components", "Q5"], 1),
    (["forms"], 1),
    (["forms", "--disc", "5"], 1),
    (["cm", "--disc", "-12"], 2),
    (["cm", "--disc", "-55", "--hilbert", "--precision-digits", "10"], 2),
    (["nonsense"], 1),
])
def test_exit_codes(capsys, argv, code):
    try:
        got = main(argv)
    except SystemExit as exc:  # argparse usage errors
        got = exc.code
    capsys.readouterr()
    assert got == code


def _write_input(tmp_path, lines):
    p = tmp_path / "types.txt"
    p.write_text("\n".join(lines) + "\n")
    return str(p)


def test_census_is_idempotent(tmp_path, capsys):
    inp = _write_input(tmp_path, ["# maximizing types", "A19", "A16+A3", "A3+A16  # duplicate"])
    out = tmp_path / "out"
    code, text, _ = run(capsys, "census", "--input", inp, "--out", str(out))
    assert code == 0
    files = sorted(os.listdir(out))
    assert files == ["A16+A3.json", "A19.json"]
    first = {f: (out / f).read_text() for f in files}
    code, text, _ = run(capsys, "census", "--input", inp, "--out", str(out), "--resume", "--json")
    assert code == 0
    assert [r["status"] for r in json.loads(text)["payload"]["results"]] == ["skipped", "skipped"]
    code, _, _ = run(capsys, "census", "--input", inp, "--out", str(out), "--workers", "2")
    assert code == 0
    assert {f: (out / f).read_text() for f in files} == first
    assert ReportDocument.parse(first["A19.json"]).payload["total_components"] == 2


def test_census_partial_failure(tmp_path, capsys):
    inp = _write_input(tmp_path, ["A19", "A1", "Q7"])
    code, text, _ = run(capsys, "census", "--input", inp, "--out", str(tmp_path / "o"))
    assert code == 3
    assert "2 failed" in text
    assert os.listdir(tmp_path / "o") == ["A19.json"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "zariski", "forms", "--det", "20"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "Λ[2,0,10]" in r.stdout
