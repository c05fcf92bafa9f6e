"""Run configuration: YAML file + command-line overrides.

Every section is optional; missing keys take the defaults of the owning
dataclass. Unknown keys are rejected so typos surface early.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import yaml

from .errors import ConfigError
from .grid.env import EnvConfig
from .grid.spec import GridSpec, load_grid_spec
from .opponent import OpponentConfig
from .pqc import PROCEDURES, RescaleRange
from .ppo import PPOConfig, QuantumConfig


@dataclass(frozen=True)
class TrainConfig:
    total_steps: int = 50_000
    outage_k: int = 2


@dataclass(frozen=True)
class ScreeningConfig:
    k: int = 2
    load_scale: float = 1.2
    deterministic: bool = False
    allow_large_k: bool = False


@dataclass(frozen=True)
class RunConfig:
    grid: Optional[str] = None
    seed: int = 0
    output: str = "runs/default"
    parallel: int = 1
    quantum: QuantumConfig = field(default_factory=QuantumConfig)
    ppo: PPOConfig = field(default_factory=PPOConfig)
    opponent: OpponentConfig = field(default_factory=OpponentConfig)
    env: EnvConfig = field(default_factory=EnvConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    screening: ScreeningConfig = field(default_factory=ScreeningConfig)

    def load_grid(self) -> GridSpec:
        return load_grid_spec(self.grid)

    def screening_env(self) -> EnvConfig:
        return replace(self.env, load_scale=self.screening.load_scale)

    def to_dict(self) -> dict:
        d = asdict(self)
        q = d["quantum"]
        q["rescale"] = list(q["rescale"])
        if q["refresh_interval"] == math.inf:
            q["refresh_interval"] = "inf"
        return d


_SECTIONS = {
    "quantum": QuantumConfig,
    "ppo": PPOConfig,
    "opponent": OpponentConfig,
    "env": EnvConfig,
    "train": TrainConfig,
    "screening": ScreeningConfig,
}


def _coerce(key: str, value, default):
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(key, f"expected true/false, got {value!r}")
        return value
    if isinstance(default, int) and not isinstance(default, bool) and not key.endswith("refresh_interval"):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return int(value)
    if isinstance(default, (int, float)):
        if isinstance(value, str) and value.lower() in ("inf", "infinity"):
            return math.inf
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(key, f"expected a number, got {value!r}")
        return value
    return value


def _build_section(name: str, cls, data) -> object:
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(name, "expected a mapping")
    defaults = cls()
    known = {f.name for f in fields(cls)}
    kwargs = {}
    for key, value in data.items():
        full = f"{name}.{key}"
        if key not in known:
            raise ConfigError(full, "unknown key")
        default = getattr(defaults, key)
        if isinstance(default, tuple):
            if not isinstance(value, (list, tuple)) or len(value) != len(default):
                raise ConfigError(full, f"expected a list of {len(default)} numbers")
            value = tuple(float(v) for v in value)
        else:
            value = _coerce(full, value, default)
        kwargs[key] = value
    try:
        section = cls(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(name, str(exc)) from None
    return section


def _validate(cfg: RunConfig):
    q = cfg.quantum
    if q.procedure not in PROCEDURES:
        raise ConfigError("quantum.procedure", f"must be one of {', '.join(PROCEDURES)}")
    if q.backend not in ("exact", "sampled", "remote"):
        raise ConfigError("quantum.backend", "must be exact, sampled or remote")
    if not q.refresh_interval >= 1:
        raise ConfigError("quantum.refresh_interval", "must be >= 1 or inf")
    if q.n_qubits < 1 or q.shots < 1:
        raise ConfigError("quantum", "n_qubits and shots must be >= 1")
    if q.h2 != 128:
        raise ConfigError("quantum.h2", "the network layout fixes h2 = 128")
    try:
        RescaleRange(*q.rescale)
    except ValueError as exc:
        raise ConfigError("quantum.rescale", str(exc)) from None
    if cfg.parallel < 1:
        raise ConfigError("parallel", "must be >= 1")
    if cfg.train.total_steps < cfg.ppo.steps_per_rollout:
        raise ConfigError("train.total_steps", "must be >= ppo.steps_per_rollout")
    if cfg.screening.k < 1:
        raise ConfigError("screening.k", "must be >= 1")
    if cfg.grid is not None and not Path(cfg.grid).exists():
        raise ConfigError("grid", f"grid file not found: {cfg.grid}")


def config_from_dict(data: Optional[dict], base_dir: Optional[Path] = None) -> RunConfig:
    data = dict(data or {})
    top = {f.name for f in fields(RunConfig)}
    for key in data:
        if key not in top:
            raise ConfigError(key, "unknown key")
    kwargs = {name: _build_section(name, cls, data.get(name)) for name, cls in _SECTIONS.items()}
    grid = data.get("grid")
    if grid is not None:
        grid = Path(grid)
        if base_dir is not None and not grid.is_absolute():
            grid = base_dir / grid
        grid = str(grid)
    for key, kind in (("seed", int), ("parallel", int)):
        if key in data:
            kwargs[key] = _coerce(key, data[key], kind())
    if "output" in data:
        kwargs["output"] = str(data["output"])
    cfg = RunConfig(grid=grid, **kwargs)
    _validate(cfg)
    return cfg


def load_config(path=None, overrides: Optional[dict] = None) -> RunConfig:
    """Read ``path`` (YAML) and apply dotted-key ``overrides`` such as
    ``{"quantum.procedure": "hybrid"}``. Relative grid paths resolve against
    the config file's directory.
    """
    data, base = {}, None
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError("config", f"config file not found: {path}")
        data = yaml.safe_load(path.read_text()) or {}
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a mapping")
        base = path.parent
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        node = data
        *parents, leaf = dotted.split(".")
        for p in parents:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(dotted, "cannot override inside a non-mapping value")
        node[leaf] = value
    if overrides and overrides.get("grid") is not None:
        base = None
    return config_from_dict(data, base)


def write_config(cfg: RunConfig, path) -> Path:
    path = Path(path)
    path.write_text(yaml.safe_dump(cfg.to_dict(), sort_keys=False))
    return path
