import pytest

from mfdmolso.config import ExperimentConfig, dump_config, load_config


def test_defaults_follow_objective_count():
    assert ExperimentConfig().resolved_population() == 120
    assert ExperimentConfig().resolved_archive() == 100
    c = ExperimentConfig(problem="DTLZ1", dim=10)
    assert c.problem == "dtlz1" and c.resolved_population() == 500 and c.resolved_archive() == 500
    assert (c.mopso_w, c.mopso_w_damp, c.mopso_c1, c.mopso_c2) == (0.9, 0.55, 1.0, 2.0)


def test_dynamic_problems_get_default_times():
    assert ExperimentConfig(problem="dmop1", dim=10).dynamic_times == [0.0, 1.0, 2.0, 3.0]
    assert ExperimentConfig(problem="dmop1", dim=10, dynamic_times=[0, 2]).dynamic_times == [0, 2]
    assert ExperimentConfig().dynamic_times == []


def test_roundtrip(tmp_path):
    c = ExperimentConfig(problem="dmop1", dim=10, seeds=[1, 2], dynamic_times=[0, 1.5], restart_enabled=False)
    path = tmp_path / "c.ini"
    path.write_text(dump_config(c))
    assert load_config(path) == c


def test_sections_and_errors(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("[experiment]\nproblem = zdt2\n[levy]\nlevy_beta = 1.2\n[metrics]\nmetric_points = none\n")
    c = load_config(path)
    assert c.problem == "zdt2" and c.levy_beta == 1.2 and c.metric_points is None
    path.write_text("[experiment]\nbogus = 1\n")
    with pytest.raises(ValueError):
        load_config(path)
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "missing.ini")
    with pytest.raises(ValueError):
        ExperimentConfig(algorithm="nsga2")
