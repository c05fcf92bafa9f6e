"""Agents that can drive a screening episode.

Each agent exposes ``name``, ``reset(seed)`` and ``act(obs, env)``; ``act``
returns an action index.
"""
from __future__ import annotations

import numpy as np

from .ppo import PolicyActor, PolicyNetwork, QuantumConfig


class DoNothingAgent:
    name = "donothing"

    def reset(self, seed: int):
        pass

    def act(self, obs, env) -> int:
        return 0


class RandomAgent:
    """Uniform over the full action set, seeded per episode."""

    name = "random"

    def reset(self, seed: int):
        self.rng = np.random.default_rng(seed)

    def act(self, obs, env) -> int:
        return int(self.rng.integers(env.n_actions))


class PolicyAgent:
    """A trained network; the quantum cache starts empty every episode."""

    def __init__(self, net: PolicyNetwork, quantum: QuantumConfig = QuantumConfig(),
                 deterministic: bool = False, name: str = None):
        self.net = net
        self.quantum = quantum
        self.deterministic = deterministic
        self.name = name or ("quantum" if net.use_quantum else "benchmark")

    def reset(self, seed: int):
        self.rng = np.random.default_rng(seed)
        provider = self.quantum.provider() if self.net.use_quantum else None
        self.actor = PolicyActor(self.net, provider, self.deterministic)

    def act(self, obs, env) -> int:
        mask = env.legal_mask() if self.net.mask_illegal else None
        action, *_ = self.actor.step(obs, env.state.step_index, self.rng, mask)
        return action


def make_baseline(name: str):
    if name == "donothing":
        return DoNothingAgent()
    if name == "random":
        return RandomAgent()
    raise ValueError(f"unknown baseline {name!r}")
