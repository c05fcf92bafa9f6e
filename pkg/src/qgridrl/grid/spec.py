"""Grid description and its YAML file format.

A grid file has three top-level keys::

    base_mva: 100            # optional, default 100
    slack_bus: 1
    buses:
      - {id: 1, load: 0.0, generation: 180.0}
    lines:
      - {from: 1, to: 2, susceptance: 16.9, limit: 120.0}

``load`` is the nominal demand in MW, ``generation`` the available generation
capacity in MW, ``susceptance`` is in per unit on ``base_mva`` and ``limit``
is the thermal rating in MW. Lines are numbered by their order in the file.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
import yaml
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import ConfigError

DEFAULT_GRID = "ieee14.yaml"


@dataclass(frozen=True)
class Bus:
    id: int
    load: float
    generation: float


@dataclass(frozen=True)
class Line:
    from_bus: int
    to_bus: int
    susceptance: float
    limit: float


@dataclass
class GridSpec:
    buses: List[Bus]
    lines: List[Line]
    slack_bus: int
    base_mva: float = 100.0

    def __post_init__(self):
        ids = [b.id for b in self.buses]
        if len(set(ids)) != len(ids):
            raise ConfigError("buses", "duplicate bus id")
        self._index = {bid: i for i, bid in enumerate(ids)}
        if self.slack_bus not in self._index:
            raise ConfigError("slack_bus", f"bus {self.slack_bus} not defined")
        for k, line in enumerate(self.lines):
            for end in (line.from_bus, line.to_bus):
                if end not in self._index:
                    raise ConfigError(f"lines[{k}]", f"unknown bus {end}")
            if line.from_bus == line.to_bus:
                raise ConfigError(f"lines[{k}]", "line connects a bus to itself")
            if line.susceptance <= 0:
                raise ConfigError(f"lines[{k}].susceptance", "must be > 0")
            if line.limit <= 0:
                raise ConfigError(f"lines[{k}].limit", "must be > 0")
        for b in self.buses:
            if b.load < 0 or b.generation < 0:
                raise ConfigError(f"buses[id={b.id}]", "load and generation must be >= 0")
        n_comp, _ = connected_components(self.adjacency(np.ones(self.n_lines, bool)))
        if n_comp != 1:
            raise ConfigError("lines", "grid is not connected with all lines in service")

    @property
    def n_buses(self) -> int:
        return len(self.buses)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    @property
    def slack_index(self) -> int:
        return self._index[self.slack_bus]

    def bus_index(self, bus_id: int) -> int:
        return self._index[bus_id]

    def line_ends(self) -> Tuple[np.ndarray, np.ndarray]:
        f = np.array([self._index[l.from_bus] for l in self.lines], dtype=int)
        t = np.array([self._index[l.to_bus] for l in self.lines], dtype=int)
        return f, t

    @property
    def susceptances(self) -> np.ndarray:
        return np.array([l.susceptance for l in self.lines])

    @property
    def limits(self) -> np.ndarray:
        return np.array([l.limit for l in self.lines])

    @property
    def loads(self) -> np.ndarray:
        return np.array([b.load for b in self.buses])

    @property
    def generation(self) -> np.ndarray:
        return np.array([b.generation for b in self.buses])

    def adjacency(self, in_service: np.ndarray):
        f, t = self.line_ends()
        f, t = f[in_service], t[in_service]
        n = self.n_buses
        return coo_matrix((np.ones(len(f)), (f, t)), shape=(n, n))

    def to_dict(self) -> dict:
        return {
            "base_mva": self.base_mva,
            "slack_bus": self.slack_bus,
            "buses": [{"id": b.id, "load": b.load, "generation": b.generation} for b in self.buses],
            "lines": [
                {"from": l.from_bus, "to": l.to_bus, "susceptance": l.susceptance, "limit": l.limit}
                for l in self.lines
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GridSpec":
        for key in ("buses", "lines", "slack_bus"):
            if key not in data:
                raise ConfigError(key, "missing from grid file")
        try:
            buses = [Bus(int(b["id"]), float(b.get("load", 0.0)), float(b.get("generation", 0.0)))
                     for b in data["buses"]]
            lines = [Line(int(l["from"]), int(l["to"]), float(l["susceptance"]), float(l["limit"]))
                     for l in data["lines"]]
        except KeyError as exc:
            raise ConfigError("grid", f"missing field {exc}") from None
        return cls(buses, lines, int(data["slack_bus"]), float(data.get("base_mva", 100.0)))


def load_grid_spec(path: Union[str, Path, None] = None) -> GridSpec:
    """Load a grid file; ``None`` loads the bundled 14-bus network."""
    if path is None:
        text = resources.files("qgridrl.data").joinpath(DEFAULT_GRID).read_text()
    else:
        path = Path(path)
        if not path.exists():
            raise ConfigError("grid", f"grid file not found: {path}")
        text = path.read_text()
    return GridSpec.from_dict(yaml.safe_load(text))


def save_grid_spec(spec: GridSpec, path: Union[str, Path]):
    Path(path).write_text(yaml.safe_dump(spec.to_dict(), sort_keys=False))
