"""CLI contract: subcommands, exit codes, report determinism, CSV plot data,
and config validation."""

import json
import re

import numpy as np
import pytest

from seqfpp import cli


def run(argv, tmp_path, sub="run"):
    out = tmp_path / sub
    code = cli.main(argv + ["--out", str(out)])
    report = None
    rp = out / "report.json"
    if rp.exists():
        report = json.loads(rp.read_text())
    return code, report, out


def test_norm_prints_value(tmp_path, capsys):
    code, report, _ = run(["norm", "--space", "lin-ell1", "--vec", "0,0,1"], tmp_path)
    assert code == 0
    assert capsys.readouterr().out.strip() == "0.998051"
    assert report["value"] == pytest.approx(512.0 / 513.0)


def test_orbit_example(tmp_path, capsys):
    code, report, out = run(
        ["orbit", "--map", "f0", "--space", "ell1", "--start", "e1", "--steps", "5"],
        tmp_path,
    )
    assert code == 0
    assert "2,2,2,2,2" in capsys.readouterr().out
    assert report["orbit"]["step_displacements"] == [2.0] * 5
    csv_text = (out / "orbit.csv").read_text().splitlines()
    assert csv_text[0].startswith("step,displacement")
    assert len(csv_text) == 6


def test_basis_constant_command(tmp_path):
    code, report, _ = run(
        ["basis-constant", "--preset", "summing", "--space", "c0-sup", "--N", "8"],
        tmp_path,
    )
    assert code == 0
    assert report["estimate"]["lower"] == 2.0
    assert report["estimate"]["certified"] is True


def test_alpha_command_violation_exit(tmp_path):
    code, report, _ = run(
        ["alpha", "--K", "2", "--inf-norm", "1", "--sup-norm", "1", "--N", "8",
         "--alphas", "0.6,0.6,0.6"],
        tmp_path,
    )
    assert code == 1
    assert report["validation"]["passed"] is False


def test_seed_mandatory_for_randomized(tmp_path, capsys):
    code = cli.main(["hj-check", "--preset", "summing", "--N", "6",
                     "--out", str(tmp_path / "x")])
    assert code == 2
    assert "seed" in capsys.readouterr().err


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"preset": "summing", "mystery": 1}))
    code = cli.main(["wide-s", "--config", str(cfg), "--out", str(tmp_path / "y")])
    assert code == 2
    assert "mystery" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"space": "c0-sup", "vec": "1,1"}))
    code, report, _ = run(["norm", "--config", str(cfg), "--vec", "0,0,1"], tmp_path)
    assert code == 0
    assert report["vec"] == [0.0, 0.0, 1.0]


def test_bad_config_json(tmp_path, capsys):
    cfg = tmp_path / "broken.json"
    cfg.write_text("{not json")
    code = cli.main(["norm", "--config", str(cfg), "--space", "c0", "--vec", "1",
                     "--out", str(tmp_path / "z")])
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith("error:") and len(err.strip().splitlines()) == 1


def _strip_timestamp(text: str) -> str:
    return re.sub(r'^\s*"generated_at": "[^"]*",?\n', "", text, flags=re.M)


def test_report_determinism(tmp_path):
    argv = ["hj-check", "--preset", "summing", "--N", "8", "--trials", "500",
            "--seed", "7"]
    _, _, out1 = run(argv, tmp_path, "a")
    _, _, out2 = run(argv, tmp_path, "b")
    raw1 = (out1 / "report.json").read_text()
    raw2 = (out2 / "report.json").read_text()
    assert _strip_timestamp(raw1) == _strip_timestamp(raw2)


def test_displacement_csv(tmp_path):
    code, report, out = run(
        ["displacement", "--map", "f0", "--space", "ell1", "--N", "6"], tmp_path
    )
    assert code == 0
    lines = (out / "displacement.csv").read_text().splitlines()
    assert lines[0] == "N,min_displacement,certified"
    assert len(lines) == 6  # N = 2..6
    assert report["final"]["best_value"] == pytest.approx(2.0 / 6.0, abs=1e-9)


def test_uniform_probe_csv(tmp_path):
    code, report, out = run(
        ["uniform-probe", "--map", "f0", "--space", "ell1", "--N", "6",
         "--p-max", "5", "--seed", "1"],
        tmp_path,
    )
    assert code == 0
    lines = (out / "lipschitz_vs_p.csv").read_text().splitlines()
    assert len(lines) == 6
    assert report["result"]["sup"] == 1.0


def test_key_lemma_command(tmp_path):
    code, report, _ = run(
        ["key-lemma", "--preset", "summing", "--space", "c0-sup", "--N", "6",
         "--mode", "enum", "--trials", "10", "--seed", "3"],
        tmp_path,
    )
    assert code == 0
    assert report["violations"] == 0


def test_dominate_command(tmp_path):
    code, report, _ = run(
        ["dominate", "--from-preset", "canonical", "--from-space", "ell1",
         "--to-preset", "summing", "--to-space", "c0-sup", "--N", "6"],
        tmp_path,
    )
    assert code == 0
    assert report["estimate"]["lower"] == 1.0


def test_verify_all_small(tmp_path, capsys):
    code, report, _ = run(["verify-all", "--preset", "summing", "--N", "8",
                           "--seed", "7"], tmp_path)
    out = capsys.readouterr().out
    assert code == 0, out + json.dumps(report.get("checks", []), indent=1)
    assert all(c["passed"] for c in report["checks"])
    assert out.count("[PASS]") == len(report["checks"])


def test_out_dir_env_var(tmp_path, monkeypatch):
    target = tmp_path / "from_env"
    monkeypatch.setenv("SEQFPP_OUT", str(target))
    code = cli.main(["norm", "--space", "c0", "--vec", "1,2"])
    assert code == 0
    assert (target / "report.json").exists()


def test_map_build_command(tmp_path):
    code, report, _ = run(["map-build", "--map", "f2", "--N", "4", "--J", "12"], tmp_path)
    assert code == 0
    assert report["map"]["mass_defect_col"] == 2.0 ** -12
    col1 = report["map"]["columns"][0]
    assert col1[0] == [2, 0.5]
