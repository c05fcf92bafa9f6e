"""scikit-learn style wrappers around the circuit and the trained agent."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .agents import PolicyAgent
from .gcn import ObservationGraph
from .grid.env import EnvConfig, GridEnv
from .grid.spec import load_grid_spec
from .opponent import OpponentConfig
from .pqc import PQCParameters, RescaleRange, evaluate, make_backend, quantum_feature
from .ppo import PPOConfig, QuantumConfig, forward, train


class PQCFeatureTransformer(TransformerMixin, BaseEstimator):
    """Maps rows of 2n rotation angles to quantum features.

    Parameters
    ----------
    n_qubits : int
        Circuit width; each input row must hold ``2 * n_qubits`` angles.
    backend : {"exact", "sampled"}
    shots, seed : int
        Sampling settings; row ``i`` is sampled with seed ``seed + i``.
    lo, hi : float
        Target range of the rescaled expectation.
    h2 : int
        Broadcast width. With ``output="expectation"`` the raw expectation is
        returned as a single column instead.
    """

    def __init__(self, n_qubits=4, backend="exact", shots=1024, seed=0, lo=0.0, hi=1.0,
                 h2=128, output="feature"):
        self.n_qubits = n_qubits
        self.backend = backend
        self.shots = shots
        self.seed = seed
        self.lo = lo
        self.hi = hi
        self.h2 = h2
        self.output = output

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        if X.shape[1] != 2 * self.n_qubits:
            raise ValueError(f"expected {2 * self.n_qubits} angle columns, got {X.shape[1]}")
        if self.output not in ("feature", "expectation"):
            raise ValueError(f"unknown output {self.output!r}")
        self.range_ = RescaleRange(self.lo, self.hi)
        self.backend_ = make_backend(self.backend, self.shots, self.seed)
        self.n_features_in_ = X.shape[1]
        return self

    def expectations(self, X) -> np.ndarray:
        check_is_fitted(self, "backend_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        return np.array([
            evaluate(PQCParameters(row, self.n_qubits), self.backend_, self.seed + i)
            for i, row in enumerate(X)
        ])

    def transform(self, X):
        e = self.expectations(X)
        if self.output == "expectation":
            return e[:, None]
        return np.stack([quantum_feature(v, self.range_, self.h2).vector for v in e])


class GridSecurityAgent(BaseEstimator):
    """PPO agent on the grid environment behind ``fit`` / ``predict``.

    ``fit`` trains on the bundled 14-bus grid unless ``grid`` names a file;
    ``predict`` maps a list of :class:`ObservationGraph` to action indices.
    """

    def __init__(self, procedure="hybrid", refresh_interval=50, total_steps=50_000,
                 load_scale=1.2, opponent_budget=3, opponent_interval=10, opponent_per_attack=1,
                 outage_k=2, grid=None, seed=0):
        self.procedure = procedure
        self.refresh_interval = refresh_interval
        self.total_steps = total_steps
        self.load_scale = load_scale
        self.opponent_budget = opponent_budget
        self.opponent_interval = opponent_interval
        self.opponent_per_attack = opponent_per_attack
        self.outage_k = outage_k
        self.grid = grid
        self.seed = seed

    def _quantum(self) -> QuantumConfig:
        return QuantumConfig(procedure=self.procedure, refresh_interval=self.refresh_interval,
                             seed=self.seed)

    def fit(self, X=None, y=None, ppo_config: PPOConfig = PPOConfig()):
        spec = load_grid_spec(self.grid)
        env_cfg = EnvConfig(load_scale=self.load_scale)
        opp = OpponentConfig(self.opponent_budget, self.opponent_interval, self.opponent_per_attack)
        self.net_, self.training_log_ = train(
            lambda s: GridEnv(spec, env_cfg, s), opp, ppo_config, self._quantum(),
            self.total_steps, self.seed, self.outage_k)
        self.spec_ = spec
        return self

    def agent(self, deterministic=False) -> PolicyAgent:
        check_is_fitted(self, "net_")
        return PolicyAgent(self.net_, self._quantum(), deterministic)

    def predict_proba(self, observations, quantum_scalar=None):
        """Action probabilities; the quantum feature is evaluated per observation
        unless a fixed expectation ``quantum_scalar`` is given. Observations carry
        no legality information, so the distribution is over all actions."""
        check_is_fitted(self, "net_")
        q = self._quantum()
        out = []
        for obs in observations:
            feat = None
            if self.net_.use_quantum:
                if quantum_scalar is None:
                    e = evaluate(self.net_.angles(self.net_.pooled(obs)))
                else:
                    e = quantum_scalar
                feat = quantum_feature(e, RescaleRange(*q.rescale), q.h2)
            probs, _ = forward(self.net_, obs, feat)
            out.append(probs)
        return np.array(out)

    def predict(self, observations, quantum_scalar=None):
        return np.argmax(self.predict_proba(observations, quantum_scalar), axis=1)
