"""Exact statevector simulation for small H/RY/RZ/CNOT circuits.

Qubit ordering is little-endian: qubit ``q`` is bit ``q`` of the basis index,
so the bitstring of index ``z`` reads ``q_{n-1} ... q_1 q_0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import InvalidArgumentError, InvalidDistributionError, InvalidGateError

NORM_TOL = 1e-10

GATE_KINDS = ("H", "RY", "RZ", "CNOT")

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(phi: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * phi), 0.0], [0.0, np.exp(0.5j * phi)]], dtype=complex
    )


@dataclass(frozen=True)
class Gate:
    """A single gate. ``angle`` is used by RY/RZ, ``control`` by CNOT."""

    kind: str
    target: int
    control: Optional[int] = None
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise InvalidGateError(f"unknown gate kind {self.kind!r}")
        if self.kind == "CNOT":
            if self.control is None:
                raise InvalidGateError("CNOT needs a control qubit")
            if self.control == self.target:
                raise InvalidGateError("CNOT control and target must differ")
        elif self.control is not None:
            raise InvalidGateError(f"{self.kind} takes no control qubit")

    def matrix(self) -> np.ndarray:
        """2x2 matrix for single-qubit kinds."""
        if self.kind == "H":
            return _H
        if self.kind == "RY":
            return ry_matrix(self.angle)
        if self.kind == "RZ":
            return rz_matrix(self.angle)
        raise InvalidGateError("CNOT has no single-qubit matrix")

    def inverse(self) -> "Gate":
        if self.kind in ("RY", "RZ"):
            return Gate(self.kind, self.target, angle=-self.angle)
        return self

    def qubits(self):
        return (self.target,) if self.control is None else (self.control, self.target)


@dataclass
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidArgumentError("n_qubits must be positive")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise InvalidArgumentError(
                f"expected {2**self.n_qubits} amplitudes, got {self.amplitudes.shape}"
            )

    @classmethod
    def zero(cls, n_qubits: int) -> "Statevector":
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "Statevector":
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    """Return a new statevector with ``gate`` applied; the input is untouched."""
    n = state.n_qubits
    for q in gate.qubits():
        if not 0 <= q < n:
            raise InvalidGateError(f"qubit index {q} out of range for {n} qubits")
    psi = state.amplitudes
    if gate.kind == "CNOT":
        idx = np.arange(2**n)
        flipped = idx ^ (((idx >> gate.control) & 1) << gate.target)
        return Statevector(n, psi[flipped])
    q = gate.target
    view = psi.reshape(2 ** (n - q - 1), 2, 2**q)
    out = np.einsum("ij,ajb->aib", gate.matrix(), view)
    return Statevector(n, out.reshape(-1))


def run_circuit(gates: Iterable[Gate], n_qubits: int,
                initial: Optional[Statevector] = None) -> Statevector:
    state = Statevector.zero(n_qubits) if initial is None else initial
    for gate in gates:
        state = apply_gate(state, gate)
    return state


@dataclass
class MeasurementDistribution:
    """Outcome probabilities indexed by the integer value of the bitstring."""

    n_qubits: int
    probabilities: np.ndarray
    shots: Optional[int] = None

    def __post_init__(self):
        self.probabilities = np.asarray(self.probabilities, dtype=float)
        if self.probabilities.shape != (2**self.n_qubits,):
            raise InvalidDistributionError("probability vector has wrong length")

    def bitstring(self, z: int) -> str:
        return format(z, f"0{self.n_qubits}b")

    def as_dict(self) -> dict:
        """Map of bitstring to probability (zero entries dropped)."""
        return {
            self.bitstring(z): float(p)
            for z, p in enumerate(self.probabilities)
            if p > 0
        }

    @classmethod
    def from_dict(cls, probs: dict) -> "MeasurementDistribution":
        if not probs:
            raise InvalidDistributionError("empty distribution")
        n = len(next(iter(probs)))
        vec = np.zeros(2**n)
        for bits, p in probs.items():
            if len(bits) != n:
                raise InvalidDistributionError("bitstrings of unequal length")
            vec[int(bits, 2)] += p
        return cls(n, vec)


def exact_distribution(state: Statevector) -> MeasurementDistribution:
    probs = np.abs(state.amplitudes) ** 2
    if abs(probs.sum() - 1.0) > NORM_TOL:
        raise InvalidDistributionError(
            f"state is not normalized (norm^2 = {probs.sum():.3e})"
        )
    return MeasurementDistribution(state.n_qubits, probs)


def sample_distribution(state: Statevector, shots: int, seed: int) -> MeasurementDistribution:
    """Empirical frequencies of ``shots`` seeded draws from the exact distribution."""
    if shots < 1:
        raise InvalidArgumentError("shots must be >= 1")
    exact = exact_distribution(state).probabilities
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, exact / exact.sum())
    return MeasurementDistribution(state.n_qubits, counts / shots, shots=shots)


def _parity_signs(n_qubits: int) -> np.ndarray:
    idx = np.arange(2**n_qubits)
    weights = np.zeros_like(idx)
    for q in range(n_qubits):
        weights += (idx >> q) & 1
    return np.where(weights % 2 == 0, 1.0, -1.0)


def parity_expectation(dist: MeasurementDistribution) -> float:
    """Z-parity expectation: sum over outcomes of (-1)^popcount(z) * p_z."""
    p = dist.probabilities
    if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-6:
        raise InvalidDistributionError(
            f"probabilities must be non-negative and sum to 1 (sum = {p.sum():.6g})"
        )
    value = float(np.dot(_parity_signs(dist.n_qubits), p))
    return min(1.0, max(-1.0, value))
