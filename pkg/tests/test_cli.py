import json
from pathlib import Path

from mfdmolso.cli import main

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def test_run_command(tmp_path, capsys):
    code = main(["run", "--problem", "zdt2", "--dim", "5", "--pop", "20", "--iters", "5",
                 "--archive", "10", "--seed", "0", "1", "--out", str(tmp_path)])
    assert code == 0
    assert "GD=" in capsys.readouterr().out
    rec = json.loads((tmp_path / "mf-dmolso_zdt2_d5_s1_metrics.json").read_text())
    assert rec["seed"] == 1 and rec["generations"] == 5


def test_suite_command(tmp_path, capsys):
    ini = tmp_path / "a.ini"
    ini.write_text("[experiment]\nproblem = zdt1\ndim = 4\npopulation_size = 20\niterations = 3\narchive_capacity = 10\nseeds = 0, 1\n")
    assert main(["suite", str(ini), "--out", str(tmp_path / "out")]) == 0
    assert "2 runs, 0 failed" in capsys.readouterr().out
    assert main(["suite", "--out", str(tmp_path / "empty")]) == 0


def test_robot_command(tmp_path, capsys):
    code = main(["robot", "--pop", "20", "--iters", "4", "--archive", "10", "--seed", "0", "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "knee durations" in out and "C(MF-DMOLSO, MOPSO)" in out


def test_shipped_configs_load():
    from mfdmolso.config import load_config

    names = sorted(p.name for p in CONFIGS.glob("*.ini"))
    assert "zdt1_d30.ini" in names
    for p in CONFIGS.glob("*.ini"):
        load_config(p)
