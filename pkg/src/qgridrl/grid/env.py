"""Grid MDP: DC power flow, stochastic loads, line switching, cascades.

A step applies, in order: the opponent's disconnections, the agent action,
a fresh lognormal load draw, power flow, overload tripping, and the reward.
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvalidArgumentError
from ..gcn import ObservationGraph
from .powerflow import PowerFlowResult, solve_dc_power_flow
from .spec import GridSpec, load_grid_spec

log = logging.getLogger(__name__)

N_NODE_FEATURES = 5


def node_feature_dim(spec: GridSpec) -> int:
    """Width of the observation: the grid features plus a one-hot bus id."""
    return N_NODE_FEATURES + spec.n_buses


@dataclass(frozen=True)
class EnvConfig:
    max_steps: int = 100
    load_scale: float = 1.0
    load_sigma: float = 0.02
    overload_window: int = 3
    hard_overload: float = 2.0
    reconnect_cooldown: int = 5
    initial_outage_cooldown: int = 0
    blackout_fraction: float = 0.5
    overload_coef: float = 0.5
    topology_coef: float = 0.1
    action_coef: float = 0.05

    def __post_init__(self):
        if self.max_steps < 1 or self.overload_window < 1:
            raise InvalidArgumentError("max_steps and overload_window must be >= 1")
        if self.load_scale <= 0 or self.load_sigma < 0:
            raise InvalidArgumentError("load_scale must be > 0 and load_sigma >= 0")


@dataclass(frozen=True)
class Action:
    kind: str = "noop"
    line: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("noop", "disconnect", "reconnect"):
            raise InvalidArgumentError(f"unknown action kind {self.kind!r}")
        if (self.kind == "noop") != (self.line is None):
            raise InvalidArgumentError("noop takes no line; line actions need one")

    @classmethod
    def from_index(cls, index: int, n_lines: int) -> "Action":
        """0 is noop, 1..L disconnect line i-1, L+1..2L reconnect line i-L-1."""
        if not 0 <= index <= 2 * n_lines:
            raise InvalidArgumentError(f"action index {index} out of range")
        if index == 0:
            return cls()
        if index <= n_lines:
            return cls("disconnect", index - 1)
        return cls("reconnect", index - n_lines - 1)

    def index(self, n_lines: int) -> int:
        if self.kind == "noop":
            return 0
        return 1 + self.line + (n_lines if self.kind == "reconnect" else 0)

    def __str__(self):
        return "noop" if self.kind == "noop" else f"{self.kind}({self.line})"


def n_actions(n_lines: int) -> int:
    return 2 * n_lines + 1


@dataclass(frozen=True)
class RewardBreakdown:
    survival: float
    overload: float
    topo_change: float
    action: float

    @property
    def total(self) -> float:
        return self.survival + self.overload + self.topo_change + self.action


@dataclass
class GridState:
    line_in_service: np.ndarray
    line_flow: np.ndarray
    loading: np.ndarray
    overload_age: np.ndarray
    cooldown: np.ndarray
    demand: np.ndarray
    step_index: int = 0
    alive: bool = True
    load_scale: float = 1.0
    cascade_count: int = 0
    last_cascade_passes: int = 0
    last_tripped: int = 0
    pf: Optional[PowerFlowResult] = field(default=None, repr=False)

    def copy(self) -> "GridState":
        return replace(
            self,
            line_in_service=self.line_in_service.copy(),
            line_flow=self.line_flow.copy(),
            loading=self.loading.copy(),
            overload_age=self.overload_age.copy(),
            cooldown=self.cooldown.copy(),
            demand=self.demand.copy(),
        )

    @property
    def max_loading(self) -> float:
        live = self.loading[self.line_in_service]
        return float(live.max()) if live.size else 0.0


def _apply_flow(spec: GridSpec, state: GridState) -> PowerFlowResult:
    pf = solve_dc_power_flow(spec, state.line_in_service, state.demand)
    state.pf = pf
    state.line_flow = pf.flows
    state.loading = np.abs(pf.flows) / spec.limits
    return pf


def is_blackout(spec: GridSpec, pf: PowerFlowResult, cfg: EnvConfig) -> bool:
    """Majority of load unserved, or the slack bus's island serves no load."""
    if pf.unserved_fraction >= cfg.blackout_fraction:
        return True
    slack_island = pf.components == pf.components[spec.slack_index]
    if slack_island.sum() == 1:
        return True
    return pf.demand[slack_island].sum() > 0 and pf.served[slack_island].sum() <= 0


def trip_overloads(spec: GridSpec, state: GridState, cfg: EnvConfig = EnvConfig()):
    """Age overloads, trip lines past the window, re-solve until stable.

    Lines whose loading exceeds 1 gain one step of overload age; lines at age
    ``overload_window`` or loading at ``hard_overload`` trip. After each
    re-solve only the hard threshold trips lines. Every pass that trips at
    least one line adds one to the cascade count. Returns
    ``(state, lines_tripped)``; the input state is not modified.
    """
    state = state.copy()
    live = state.line_in_service
    over = live & (state.loading > 1.0)
    state.overload_age = np.where(over, state.overload_age + 1, 0)
    trip = live & ((state.overload_age >= cfg.overload_window) | (state.loading >= cfg.hard_overload))
    passes = tripped = 0
    while trip.any():
        passes += 1
        tripped += int(trip.sum())
        state.line_in_service = state.line_in_service & ~trip
        state.overload_age[trip] = 0
        state.cooldown[trip] = cfg.reconnect_cooldown
        _apply_flow(spec, state)
        trip = state.line_in_service & (state.loading >= cfg.hard_overload)
    state.cascade_count += passes
    state.last_cascade_passes = passes
    state.last_tripped = tripped
    return state, tripped


def observe(state: GridState, spec: GridSpec, cfg: EnvConfig = EnvConfig()) -> ObservationGraph:
    """Per-bus features and the in-service edge list.

    Columns: net injection (p.u.), mean loading of incident in-service lines,
    incident out-of-service lines, step index / max_steps, incident lines that
    can be reconnected right now, then a one-hot bus identity.
    """
    f, t = spec.line_ends()
    n = spec.n_buses
    live = state.line_in_service
    feats = np.zeros((n, N_NODE_FEATURES))
    if state.pf is not None:
        feats[:, 0] = state.pf.injections / spec.base_mva
    load_sum = np.zeros(n)
    live_count = np.zeros(n)
    for ends in (f, t):
        np.add.at(load_sum, ends[live], state.loading[live])
        np.add.at(live_count, ends[live], 1.0)
        np.add.at(feats[:, 2], ends[~live], 1.0)
        np.add.at(feats[:, 4], ends[~live & (state.cooldown == 0)], 1.0)
    feats[:, 1] = np.divide(load_sum, live_count, out=np.zeros(n), where=live_count > 0)
    feats[:, 3] = state.step_index / cfg.max_steps
    edges = tuple(zip(f[live].tolist(), t[live].tolist()))
    return ObservationGraph(np.hstack([feats, np.eye(n)]), edges)


def reward(prev: GridState, action: Action, next_state: GridState, topology_changed: bool,
           cfg: EnvConfig = EnvConfig()) -> RewardBreakdown:
    live = next_state.line_in_service
    excess = np.maximum(next_state.loading[live] - 1.0, 0.0).sum()
    return RewardBreakdown(
        survival=1.0 if next_state.alive else 0.0,
        overload=-cfg.overload_coef * float(excess),
        topo_change=-cfg.topology_coef if topology_changed else 0.0,
        action=-cfg.action_coef if action.kind != "noop" else 0.0,
    )


@dataclass
class StepResult:
    observation: ObservationGraph
    reward: RewardBreakdown
    done: bool
    info: dict


class GridEnv:
    """One grid episode at a time. ``reset`` then ``step`` until done."""

    def __init__(self, spec: Optional[GridSpec] = None, config: EnvConfig = EnvConfig(),
                 seed: int = 0):
        self.spec = load_grid_spec() if spec is None else spec
        self.config = config
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.state: Optional[GridState] = None
        self.trace: List[dict] = []

    @property
    def n_lines(self) -> int:
        return self.spec.n_lines

    @property
    def n_actions(self) -> int:
        return n_actions(self.spec.n_lines)

    def reset(self, initial_outage: Iterable[int] = (), seed: Optional[int] = None) -> ObservationGraph:
        if seed is not None:
            self.seed = seed
            self.rng = np.random.default_rng(seed)
        cfg, spec = self.config, self.spec
        m = spec.n_lines
        in_service = np.ones(m, dtype=bool)
        cooldown = np.zeros(m, dtype=int)
        for line in initial_outage:
            if not 0 <= line < m:
                raise InvalidArgumentError(f"outage line {line} out of range")
            in_service[line] = False
            cooldown[line] = cfg.initial_outage_cooldown
        self.state = GridState(
            line_in_service=in_service,
            line_flow=np.zeros(m),
            loading=np.zeros(m),
            overload_age=np.zeros(m, dtype=int),
            cooldown=cooldown,
            demand=spec.loads * cfg.load_scale,
            load_scale=cfg.load_scale,
        )
        pf = _apply_flow(spec, self.state)
        self.state.alive = not is_blackout(spec, pf, cfg)
        self.trace = []
        return observe(self.state, spec, cfg)

    @property
    def done(self) -> bool:
        s = self.state
        return (not s.alive) or s.step_index >= self.config.max_steps

    def legal(self, action: Action, state: Optional[GridState] = None) -> bool:
        s = self.state if state is None else state
        if action.kind == "noop":
            return True
        if not 0 <= action.line < self.n_lines:
            return False
        if s.cooldown[action.line] > 0:
            return False
        return bool(s.line_in_service[action.line]) == (action.kind == "disconnect")

    def legal_mask(self, state: Optional[GridState] = None) -> np.ndarray:
        """Boolean mask over action indices that are legal in ``state``."""
        s = self.state if state is None else state
        free = s.cooldown == 0
        return np.concatenate([[True], s.line_in_service & free, ~s.line_in_service & free])

    def step(self, action, attack: Sequence[int] = ()) -> StepResult:
        if self.state is None:
            raise InvalidArgumentError("call reset() before step()")
        if self.done:
            raise InvalidArgumentError("episode is over; call reset()")
        if not isinstance(action, Action):
            action = Action.from_index(int(action), self.n_lines)
        cfg, spec = self.config, self.spec
        prev = self.state
        s = prev.copy()

        attacked = sorted(int(l) for l in attack if s.line_in_service[l])
        s.line_in_service[attacked] = False
        s.cooldown[attacked] = cfg.reconnect_cooldown

        legal = self.legal(action, s)
        changed = False
        if not legal:
            log.debug("illegal action %s at step %d treated as noop", action, s.step_index)
        elif action.kind != "noop":
            s.line_in_service[action.line] = action.kind == "reconnect"
            s.cooldown[action.line] = cfg.reconnect_cooldown
            changed = True

        noise = self.rng.normal(0.0, cfg.load_sigma, size=spec.n_buses)
        s.demand = spec.loads * cfg.load_scale * np.exp(noise - 0.5 * cfg.load_sigma**2)
        _apply_flow(spec, s)
        s, _ = trip_overloads(spec, s, cfg)
        s.alive = not is_blackout(spec, s.pf, cfg)
        r = reward(prev, action, s, changed, cfg)
        s.step_index += 1
        s.cooldown = np.maximum(s.cooldown - 1, 0)
        self.state = s
        done = self.done
        info = {
            "attacked": attacked,
            "legal": legal,
            "cascades": s.last_cascade_passes,
            "tripped": s.last_tripped,
            "max_loading": s.max_loading,
            "blackout": not s.alive,
        }
        self.trace.append({
            "step": s.step_index - 1,
            "action": str(action),
            "attacked_lines": " ".join(map(str, attacked)),
            "total_reward": r.total,
            "max_loading": s.max_loading,
            "cascades": s.last_cascade_passes,
        })
        return StepResult(observe(s, spec, cfg), r, done, info)

    def observation(self) -> ObservationGraph:
        return observe(self.state, self.spec, self.config)

    def export_trace(self, path):
        """Write the episode trace as CSV."""
        cols = ["step", "action", "attacked_lines", "total_reward", "max_loading", "cascades"]
        with Path(path).open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=cols)
            writer.writeheader()
            writer.writerows(self.trace)
