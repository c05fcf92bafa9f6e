"""Parameterized circuit, backends, and the quantum feature access policies.

The circuit is H on every qubit, then RY(theta_j) and RZ(theta_{j+n}) on each
qubit j, then a CNOT chain over consecutive qubit pairs. Its Z-parity
expectation is rescaled into a target range and broadcast into a constant
feature vector that the policy concatenates with the pooled GCN features.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Union

import numpy as np

from .errors import (
    BackendUnavailableError,
    InvalidArgumentError,
    InvalidExpectationError,
    InvalidParametersError,
)
from .quantum import (
    Gate,
    MeasurementDistribution,
    exact_distribution,
    parity_expectation,
    run_circuit,
    sample_distribution,
)

DEFAULT_N_QUBITS = 4
DEFAULT_H2 = 128
DEFAULT_SHOTS = 1024

PROCEDURES = ("iterative", "cached", "hybrid", "none")


@dataclass(frozen=True)
class PQCParameters:
    theta: np.ndarray
    n_qubits: int = DEFAULT_N_QUBITS

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float).reshape(-1)
        if self.n_qubits < 1:
            raise InvalidParametersError("n_qubits must be positive")
        if theta.shape != (2 * self.n_qubits,):
            raise InvalidParametersError(
                f"expected {2 * self.n_qubits} angles for {self.n_qubits} qubits, "
                f"got {theta.size}"
            )
        object.__setattr__(self, "theta", theta)


@dataclass(frozen=True)
class RescaleRange:
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidArgumentError(f"rescale range needs lo < hi, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class QuantumFeature:
    vector: np.ndarray
    scalar: float
    stale: bool = False


def build_circuit(params: PQCParameters) -> List[Gate]:
    n = params.n_qubits
    theta = params.theta
    gates = [Gate("H", q) for q in range(n)]
    for j in range(n):
        gates.append(Gate("RY", j, angle=float(theta[j])))
        gates.append(Gate("RZ", j, angle=float(theta[j + n])))
    gates.extend(Gate("CNOT", k + 1, control=k) for k in range(n - 1))
    return gates


# --------------------------------------------------------------------------
# backends


class ExactBackend:
    """Noise-free statevector probabilities."""

    name = "exact"

    def run(self, gates, n_qubits, seed=None) -> MeasurementDistribution:
        return exact_distribution(run_circuit(gates, n_qubits))


@dataclass
class SampledBackend:
    """Shot sampling from the exact distribution; seeded per call."""

    shots: int = DEFAULT_SHOTS
    seed: int = 0
    name: str = field(default="sampled", init=False)

    def __post_init__(self):
        if self.shots < 1:
            raise InvalidArgumentError("shots must be >= 1")

    def run(self, gates, n_qubits, seed=None) -> MeasurementDistribution:
        state = run_circuit(gates, n_qubits)
        return sample_distribution(state, self.shots, self.seed if seed is None else seed)


class RemoteBackend:
    """Slot for a remote quantum service. No client ships with this package."""

    name = "remote"

    def __init__(self, endpoint: Optional[str] = None):
        self.endpoint = endpoint

    def run(self, gates, n_qubits, seed=None):
        raise BackendUnavailableError(
            f"no remote quantum client configured (endpoint={self.endpoint!r})"
        )


def make_backend(mode: str = "exact", shots: int = DEFAULT_SHOTS, seed: int = 0):
    if mode == "exact":
        return ExactBackend()
    if mode == "sampled":
        return SampledBackend(shots=shots, seed=seed)
    if mode == "remote":
        return RemoteBackend()
    raise InvalidArgumentError(f"unknown backend mode {mode!r}")


def call_seed(base_seed: int, step: int) -> int:
    """Per-call sampling seed; depends only on (base seed, training step)."""
    return int(np.random.SeedSequence([int(base_seed), int(step)]).generate_state(1)[0])


def evaluate(params: PQCParameters, backend=None, seed: Optional[int] = None) -> float:
    """Run the circuit on |0...0> and return its Z-parity expectation."""
    backend = ExactBackend() if backend is None else backend
    dist = backend.run(build_circuit(params), params.n_qubits, seed)
    return parity_expectation(dist)


def quantum_feature(expectation: float, rescale: RescaleRange = RescaleRange(),
                    h2: int = DEFAULT_H2) -> QuantumFeature:
    if not -1.0 - 1e-9 <= expectation <= 1.0 + 1e-9:
        raise InvalidExpectationError(f"expectation {expectation} outside [-1, 1]")
    if h2 < 1:
        raise InvalidArgumentError("h2 must be positive")
    e = min(1.0, max(-1.0, float(expectation)))
    s = (e + 1.0) / 2.0 * (rescale.hi - rescale.lo) + rescale.lo
    return QuantumFeature(np.full(h2, s), e)


# --------------------------------------------------------------------------
# caching


@dataclass(frozen=True)
class QuantumCache:
    """Cached expectation ``value`` with validity flag and age in steps.

    ``refresh_interval`` of ``math.inf`` never refreshes once valid.
    """

    refresh_interval: float = math.inf
    value: float = 0.0
    valid: bool = False
    age: int = 0

    def __post_init__(self):
        if not self.refresh_interval >= 1:
            raise InvalidArgumentError("refresh_interval must be >= 1 or inf")

    def due(self) -> bool:
        return (not self.valid) or self.age >= self.refresh_interval


ParamSource = Union[PQCParameters, Callable[[], PQCParameters]]


def _resolve(params: ParamSource) -> PQCParameters:
    return params() if callable(params) else params


def cached_feature(cache: QuantumCache, params: ParamSource, step: int, backend=None,
                   seed: int = 0, rescale: RescaleRange = RescaleRange(),
                   h2: int = DEFAULT_H2):
    """Selects between a fresh evaluation and the cached scalar.

    Returns ``(feature, new_cache, called)`` where ``called`` says whether the
    backend was hit. ``params`` may be a zero-argument callable so the angles
    are only computed on refresh.
    """
    if cache.due():
        try:
            value = evaluate(_resolve(params), backend, call_seed(seed, step))
        except BackendUnavailableError:
            if not cache.valid:
                raise
            feat = quantum_feature(cache.value, rescale, h2)
            return replace(feat, stale=True), replace(cache, age=cache.age + 1), False
        return quantum_feature(value, rescale, h2), replace(cache, value=value, valid=True, age=1), True
    return quantum_feature(cache.value, rescale, h2), replace(cache, age=cache.age + 1), False


class QuantumFeatureProvider:
    """Per-step quantum feature under one of the training procedures.

    ``iterative`` evaluates each step, ``cached`` evaluates once, ``hybrid``
    refreshes every ``refresh_interval`` steps, ``none`` produces no feature.
    """

    def __init__(self, procedure: str = "hybrid", refresh_interval: float = 50,
                 backend=None, seed: int = 0, rescale: RescaleRange = RescaleRange(),
                 h2: int = DEFAULT_H2):
        if procedure not in PROCEDURES:
            raise InvalidArgumentError(f"unknown procedure {procedure!r}")
        self.procedure = procedure
        self.refresh_interval = refresh_interval
        self.backend = ExactBackend() if backend is None else backend
        self.seed = seed
        self.rescale = rescale
        self.h2 = h2
        self.backend_calls = 0
        self.reset()

    def reset(self):
        interval = {"iterative": 1, "cached": math.inf}.get(self.procedure, self.refresh_interval)
        self.cache = QuantumCache(refresh_interval=interval)
        self._last = None

    def _fresh(self, params, step):
        value = evaluate(_resolve(params), self.backend, call_seed(self.seed, step))
        self.backend_calls += 1
        return quantum_feature(value, self.rescale, self.h2)

    def feature(self, step: int, params: ParamSource) -> Optional[QuantumFeature]:
        if self.procedure == "none":
            return None
        if self.procedure == "iterative":
            self._last = self._fresh(params, step)
            return self._last
        if self.procedure == "cached":
            if self._last is None:
                self._last = self._fresh(params, step)
            return self._last
        feat, self.cache, called = cached_feature(
            self.cache, params, step, self.backend, self.seed, self.rescale, self.h2
        )
        self.backend_calls += int(called)
        self._last = feat
        return feat

    def peek(self) -> Optional[QuantumFeature]:
        """Most recent feature without touching the backend or the cache age."""
        return self._last

    def state_dict(self) -> dict:
        return {
            "backend_calls": self.backend_calls,
            "cache_value": self.cache.value,
            "cache_valid": self.cache.valid,
            "cache_age": self.cache.age,
            "last_scalar": None if self._last is None else self._last.scalar,
        }

    def load_state_dict(self, state: dict):
        self.backend_calls = int(state["backend_calls"])
        self.cache = replace(self.cache, value=float(state["cache_value"]),
                             valid=bool(state["cache_valid"]), age=int(state["cache_age"]))
        if state.get("last_scalar") is not None:
            self._last = quantum_feature(state["last_scalar"], self.rescale, self.h2)
