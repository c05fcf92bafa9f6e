import math

import pytest
import yaml

from qgridrl.config import config_from_dict, load_config, write_config
from qgridrl.errors import ConfigError


def test_defaults():
    cfg = load_config()
    assert cfg.quantum.procedure == "hybrid"
    assert cfg.quantum.refresh_interval == 50
    assert cfg.opponent.budget == 3 and cfg.opponent.interval == 10
    assert cfg.screening.load_scale == 1.2
    assert cfg.ppo.learning_rate == 1e-4


def test_file_and_override_precedence(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump({"seed": 4, "quantum": {"procedure": "cached", "refresh_interval": 10}}))
    cfg = load_config(path, {"quantum.procedure": "iterative", "seed": None})
    assert cfg.quantum.procedure == "iterative"
    assert cfg.quantum.refresh_interval == 10
    assert cfg.seed == 4


def test_inf_round_trip(tmp_path):
    cfg = config_from_dict({"quantum": {"refresh_interval": "inf"}})
    assert cfg.quantum.refresh_interval == math.inf
    out = write_config(cfg, tmp_path / "c.yaml")
    assert load_config(out).quantum.refresh_interval == math.inf


@pytest.mark.parametrize("data,key", [
    ({"quantum": {"procedur": "hybrid"}}, "quantum.procedur"),
    ({"bogus": 1}, "bogus"),
    ({"quantum": {"procedure": "sometimes"}}, "quantum.procedure"),
    ({"ppo": {"epochs_per_update": 1.5}}, "ppo.epochs_per_update"),
    ({"quantum": {"refresh_interval": 0}}, "quantum.refresh_interval"),
    ({"grid": "/nonexistent/grid.yaml"}, "grid"),
])
def test_errors_name_the_key(data, key):
    with pytest.raises(ConfigError) as info:
        config_from_dict(data)
    assert info.value.key == key


def test_relative_grid_resolves_next_to_config(tmp_path):
    (tmp_path / "g.yaml").write_text("")
    path = tmp_path / "run.yaml"
    path.write_text("grid: g.yaml\n")
    assert load_config(path).grid == str(tmp_path / "g.yaml")
