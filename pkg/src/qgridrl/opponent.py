"""Budgeted periodic attacker that disconnects the most loaded lines."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class OpponentConfig:
    budget: int = 3
    interval: int = 10
    per_attack: int = 1

    def __post_init__(self):
        if self.interval < 1 or self.per_attack < 1 or self.budget < 0:
            raise InvalidArgumentError("opponent needs interval >= 1, per_attack >= 1, budget >= 0")


@dataclass
class AttackState:
    remaining_budget: int


def should_attack(t: int, state: AttackState, cfg: OpponentConfig) -> bool:
    return t % cfg.interval == 0 and state.remaining_budget > 0


def select_targets(loading, in_service, cfg: OpponentConfig, attack_state: AttackState) -> List[int]:
    """Top in-service lines by loading; ties go to the lower line id."""
    loading = np.asarray(loading, dtype=float)
    live = np.flatnonzero(np.asarray(in_service, dtype=bool))
    k = min(cfg.per_attack, attack_state.remaining_budget, live.size)
    if k <= 0:
        return []
    # lexsort: last key is primary
    order = np.lexsort((live, -loading[live]))
    return sorted(int(i) for i in live[order[:k]])


class Opponent:
    """Holds the per-episode budget and decides each step's attack."""

    def __init__(self, config: OpponentConfig = OpponentConfig()):
        self.config = config
        self.reset()

    def reset(self):
        self.state = AttackState(self.config.budget)
        self.attacked: List[int] = []

    def attack(self, grid_state) -> List[int]:
        if not should_attack(grid_state.step_index, self.state, self.config):
            return []
        targets = select_targets(grid_state.loading, grid_state.line_in_service,
                                 self.config, self.state)
        self.state.remaining_budget -= len(targets)
        self.attacked.extend(targets)
        return targets
