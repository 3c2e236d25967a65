# tests/test_cli.py

import json
import shutil
from pathlib import Path

import pytest

from core.backend.cli.main import main
from core.backend.services.scenario_pool import ScenarioKindNotFoundError, ScenarioPool, default_pool
from core.backend.services.scenario_service import ScenarioService
from core.backend.settings import Settings, parse_window

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in ("LAGRX_WORKERS", "LAGRX_DEFAULT_WINDOW", "LAGRX_DEFAULT_TRUNCATE", "LAGRX_TRACE"):
        monkeypatch.delenv(name, raising=False)


# ------------------ настройки ------------------ #

def test_parse_window():
    assert parse_window("6, 10") == (6, 10)
    for bad in ("6", "a,b", "-1,3", "1,2,3"):
        with pytest.raises(ValueError):
            parse_window(bad)


def test_settings_from_env(monkeypatch):
    monkeypatch.setenv("LAGRX_WORKERS", "0")
    monkeypatch.setenv("LAGRX_DEFAULT_WINDOW", "garbage")
    monkeypatch.setenv("LAGRX_TRACE", "yes")
    s = Settings.from_env()
    assert s.workers == 1
    assert s.default_window == (6, 10)
    assert s.trace


def test_pool_lists_kinds():
    pool = default_pool()
    assert pool.list_kinds() == ["kirwan", "lagrangian_intersection", "localsys"]
    with pytest.raises(ScenarioKindNotFoundError):
        ScenarioPool().get_pipeline("kirwan")


# ------------------ run ------------------ #

def test_run_c2_weights_table(capsys):
    assert main(["run", str(CORPUS / "c2_weights.scn")]) == 0
    out = capsys.readouterr().out
    assert "status:   PASS" in out
    assert "(T^vM)^ss = {z_1 ≠ 0} ∪ {w_2 ≠ 0}" in out


def test_run_transverse_conormal_pair(capsys):
    assert main(["run", str(CORPUS / "conormal_transverse.scn")]) == 0
    out = capsys.readouterr().out
    assert "[PASS] equivariant_ext_vs_point" in out
    assert "[PASS] tate_vs_sym_two_term" in out
    assert "[PASS] expected equivariant_ext_c2_totals" in out



def test_run_machine_output_is_deterministic(capsys):
    path = str(CORPUS / "hkr_line.scn")
    assert main(["run", path, "--format", "machine"]) == 0
    first = capsys.readouterr().out
    assert main(["run", path, "--format", "machine"]) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["status"] == "pass"
    tor = next(t for t in payload["tables"] if t["name"] == "tor")
    assert all(isinstance(v, str) for _, row in tor["rows"] for v in row)


def test_run_window_override(tmp_path, capsys):
    report = tmp_path / "out.json"
    code = main(["run", str(CORPUS / "zero_vs_dx2.scn"), "--window", "2,3",
                 "--format", "machine", "--report", str(report)])
    assert code == 0
    assert capsys.readouterr().out == ""
    tor = next(t for t in json.loads(report.read_text(encoding="utf-8"))["tables"] if t["name"] == "tor")
    assert tor["d_values"] == ["0", "1", "2", "3"]


def test_bad_window_flag(capsys):
    assert main(["run", str(CORPUS / "hkr_line.scn"), "--window", "x"]) == 2
    assert "--window" in capsys.readouterr().err


def test_malformed_json_reports_position(tmp_path, capsys):
    bad = tmp_path / "broken.scn"
    bad.write_text('{"kind": "kirwan",\n  "body": {"rank": 1,\n', encoding="utf-8")
    assert main(["run", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "broken.scn" in err
    assert "line" in err


def test_unknown_kind_is_input_error(tmp_path, capsys):
    bad = tmp_path / "odd.scn"
    bad.write_text('{"kind": "symplectic_volume", "body": {}}', encoding="utf-8")
    assert main(["run", str(bad)]) == 2


def test_invalid_field_names_location(tmp_path, capsys):
    bad = tmp_path / "rank.scn"
    bad.write_text('{"kind": "kirwan", "body": {"rank": 1, "weights": [[1]], "chi": [1], "extra": 1}}',
                   encoding="utf-8")
    assert main(["run", str(bad)]) == 2
    assert "extra" in capsys.readouterr().err


def test_corrupted_expectation_fails(tmp_path, capsys):
    data = json.loads((CORPUS / "kirwan_p1.scn").read_text(encoding="utf-8"))
    data["expected"]["residual"]["2"] = 5
    path = tmp_path / "kirwan_p1.scn"
    path.write_text(json.dumps(data, ensure_ascii=False), encoding="utf-8")
    assert main(["run", str(path)]) == 1
    out = capsys.readouterr().out
    assert "[FAIL] expected residual" in out
    assert "mismatch at (2, 0): 1 vs 5" in out


def test_expected_rejection_passes():
    result = ScenarioService(settings=Settings()).run_file(CORPUS / "cubic_rejected.scn")
    assert result.exit_code == 0
    assert result.report.checks[0].name == "expected_rejection"
    assert "IntersectionNotClean" in result.report.checks[0].detail


def test_math_rejection_without_expectation(tmp_path):
    data = json.loads((CORPUS / "cubic_rejected.scn").read_text(encoding="utf-8"))
    del data["expect_error"]
    path = tmp_path / "cubic.scn"
    path.write_text(json.dumps(data), encoding="utf-8")
    result = ScenarioService(settings=Settings()).run_file(path)
    assert result.exit_code == 2
    assert result.report is None
    assert "IntersectionNotClean" in result.status


# ------------------ verify ------------------ #

def test_verify_corpus_passes(capsys):
    assert main(["verify", str(CORPUS)]) == 0
    out = capsys.readouterr().out
    files = sorted(p.name for p in CORPUS.glob("*.scn"))
    assert f"passed {len(files)}, failed 0, errors 0" in out


def test_verify_names_failing_file(tmp_path, capsys):
    shutil.copy(CORPUS / "circle_order2.scn", tmp_path / "a_good.scn")
    data = json.loads((CORPUS / "kirwan_p1.scn").read_text(encoding="utf-8"))
    data["expected_loci"]["M^ss"] = "everything"
    (tmp_path / "b_bad.scn").write_text(json.dumps(data, ensure_ascii=False), encoding="utf-8")
    assert main(["verify", str(tmp_path)]) == 1
    out = capsys.readouterr().out
    assert "FAIL  b_bad.scn" in out
    assert "PASS  a_good.scn" in out


def test_verify_machine_summary(tmp_path, capsys):
    shutil.copy(CORPUS / "kirwan_p1.scn", tmp_path / "kirwan_p1.scn")
    assert main(["verify", str(tmp_path), "--format", "machine"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] == "1"
    assert payload["scenarios"][0]["report"]["status"] == "pass"


def test_verify_empty_directory(tmp_path, capsys):
    assert main(["verify", str(tmp_path)]) == 2
    assert "*.scn" in capsys.readouterr().err


def test_verify_missing_directory(tmp_path):
    assert main(["verify", str(tmp_path / "nowhere")]) == 2
