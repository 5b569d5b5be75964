import json
import subprocess
import sys
from pathlib import Path

from okounkov.cli import example_path, main

EXAMPLES = Path(example_path("p1_body.json")).parent


def run_cli(*argv):
    return main(list(argv))


def test_list_examples(capsys):
    assert run_cli("list-examples") == 0
    out = capsys.readouterr().out
    assert "p1_body.json" in out
    assert "p2_seshadri.json" in out


def test_run_p1_body(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = run_cli("run", str(EXAMPLES / "p1_body.json"), "--json", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["body"]["vertices"] == [[[0, 1]], [[1, 1]]]
    assert report["exact"] is True


def test_run_negative_body(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli("run", str(EXAMPLES / "p1_negative_body.json"), "--json", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["body"]["vertices"] == [[[-2, 1]], [[-1, 1]]]


def test_run_volume_check(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli("run", str(EXAMPLES / "p2_volume.json"), "--json", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["volume_theorem"]["equal"] is True
    assert report["volume_theorem"]["vol_X"] == [4, 1]


def test_run_semigroup(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli("run", str(EXAMPLES / "simplex_growth.json"), "--json", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["det1"] == [1, 1]
    assert report["volume"] == [1, 2]
    assert report["hilbert"][60] == 61 * 62 // 2


def test_run_filtration(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli("run", str(EXAMPLES / "p1_filtration.json"), "--json", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["boucksom_chen"]["volume_filtered_body"] == [1, 2]
    assert report["transforms_gap"] == [0, 1]
    assert report["slices_equal"] is True


def test_run_seshadri_with_svg(tmp_path):
    out = tmp_path / "report.json"
    svg_dir = tmp_path / "figs"
    code = run_cli(
        "run",
        str(EXAMPLES / "p2_seshadri.json"),
        "--json",
        str(out),
        "--svg",
        str(svg_dir),
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["eps"] == [1, 1]
    assert report["verdict"]["iota"] == [1, 3]
    assert report["bundle_check"]["bodies_equal"] is True
    svgs = sorted(p.name for p in svg_dir.iterdir())
    assert svgs == ["blowup_body.svg", "profile.svg"]
    text = (svg_dir / "profile.svg").read_text()
    assert text.startswith("<svg")


def test_determinism_bytes(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    spec = str(EXAMPLES / "p1_filtration.json")
    assert run_cli("run", spec, "--json", str(a)) == 0
    assert run_cli("run", spec, "--json", str(b)) == 0
    ra = json.loads(a.read_text())
    rb = json.loads(b.read_text())
    assert ra["determinism_hash"] == rb["determinism_hash"]
    ra.pop("timing")
    rb.pop("timing")
    assert ra == rb


def test_schema_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert run_cli("run", str(bad)) == 1
    err = capsys.readouterr().err
    assert "/kind" in err


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli("run", str(bad)) == 1


def test_missing_file_exit_code():
    assert run_cli("run", "/nonexistent/spec.json") == 1


def test_check_suite_passes(tmp_path, capsys):
    out = tmp_path / "check.json"
    code = run_cli("check", "--max-degree", "6", "--json", str(out))
    assert code == 0
    text = capsys.readouterr().out
    assert "pass" in text and "FAIL" not in text
    report = json.loads(out.read_text())
    assert all(report["results"].values())


def test_console_script_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "okounkov.cli", "list-examples"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "p1_body.json" in proc.stdout


def test_verdict_mismatch_exit_code(tmp_path, monkeypatch):
    # a failing theorem check must surface as exit code 2, not an error
    import okounkov.suites as suites

    monkeypatch.setattr(
        suites, "theorem_checks", lambda *a, **k: {"stub_check": False}
    )
    spec = tmp_path / "suite.json"
    spec.write_text(json.dumps({"kind": "check-suite"}))
    assert run_cli("run", str(spec)) == 2
    assert run_cli("check") == 2
